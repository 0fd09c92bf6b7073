"""Synthetic analog-gauge dehazing toolkit.

Procedurally renders clear/degraded gauge image pairs via the atmospheric
scattering model, restores them with classical DCP and BCCR dehazing, and
scores restorations with PSNR/SSIM.
"""

from gauge_dehaze._core import (
    BccrParams,
    DcpParams,
    GaugeSceneSpec,
    MetricParams,
    apply_scattering,
    default_beta_ladder,
    default_haze_airlight,
    default_smoke_airlight,
    dehaze_bccr,
    dehaze_dcp,
    invert_scattering,
    load_image,
    load_scalar_f32,
    mse,
    psnr,
    random_scene,
    render_gauge,
    save_image,
    save_scalar_f32,
    smoke_transmission,
    ssim_global,
    ssim_windowed,
    transmission_from_depth,
)

__version__ = "0.1.0"

__all__ = [
    "BccrParams",
    "DcpParams",
    "GaugeSceneSpec",
    "MetricParams",
    "apply_scattering",
    "default_beta_ladder",
    "default_haze_airlight",
    "default_smoke_airlight",
    "dehaze_bccr",
    "dehaze_dcp",
    "invert_scattering",
    "load_image",
    "load_scalar_f32",
    "mse",
    "psnr",
    "random_scene",
    "render_gauge",
    "save_image",
    "save_scalar_f32",
    "smoke_transmission",
    "ssim_global",
    "ssim_windowed",
    "transmission_from_depth",
]
