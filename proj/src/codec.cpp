#include "gauge_dehaze/codec.hpp"

#include <jpeglib.h>
#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <vector>

namespace gdh {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) fail(path, std::strcmp(mode, "rb") == 0 ? "cannot open file" : "cannot write file");
    return f;
}

uint8_t quantize(double v) {
    double q = std::lround(std::clamp(v, 0.0, 1.0) * 255.0);
    return static_cast<uint8_t>(q);
}

// ---- PNG ----

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWriter() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

bool has_png_signature(FILE* f) {
    unsigned char sig[8];
    size_t n = std::fread(sig, 1, 8, f);
    std::rewind(f);
    return n == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

ImageBuffer decode_png(FILE* f, const std::string& path) {
    PngReader r;
    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!r.png) fail(path, "png reader allocation failed");
    r.info = png_create_info_struct(r.png);
    if (!r.info) fail(path, "png info allocation failed");
    if (setjmp(png_jmpbuf(r.png))) fail(path, "png decode error");

    png_init_io(r.png, f);
    png_read_info(r.png, r.info);

    png_uint_32 w = png_get_image_width(r.png, r.info);
    png_uint_32 h = png_get_image_height(r.png, r.info);
    int bit_depth = png_get_bit_depth(r.png, r.info);
    int color_type = png_get_color_type(r.png, r.info);

    if (bit_depth == 16) png_set_strip_16(r.png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
    if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(r.png);
    png_set_strip_alpha(r.png);
    png_read_update_info(r.png, r.info);

    if (png_get_channels(r.png, r.info) != 3) fail(path, "unsupported png channel layout");

    std::vector<uint8_t> rows(static_cast<size_t>(w) * h * 3);
    std::vector<png_bytep> row_ptrs(h);
    for (png_uint_32 y = 0; y < h; ++y) row_ptrs[y] = rows.data() + static_cast<size_t>(y) * w * 3;
    png_read_image(r.png, row_ptrs.data());
    png_read_end(r.png, nullptr);

    ImageBuffer img(static_cast<int>(w), static_cast<int>(h));
    for (size_t i = 0; i < rows.size(); ++i) img.data[i] = rows[i] / 255.0;
    return img;
}

// ---- JPEG ----

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    std::longjmp(err->jump, 1);
}

ImageBuffer decode_jpeg(FILE* f, const std::string& path) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit;
    if (setjmp(jerr.jump)) {
        jpeg_destroy_decompress(&cinfo);
        fail(path, "jpeg decode error");
    }
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, f);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    int w = static_cast<int>(cinfo.output_width);
    int h = static_cast<int>(cinfo.output_height);
    ImageBuffer img(w, h);
    std::vector<uint8_t> row(static_cast<size_t>(w) * 3);
    JSAMPROW row_ptr = row.data();
    for (int y = 0; y < h; ++y) {
        jpeg_read_scanlines(&cinfo, &row_ptr, 1);
        for (size_t i = 0; i < row.size(); ++i)
            img.data[static_cast<size_t>(y) * w * 3 + i] = row[i] / 255.0;
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return img;
}

bool has_jpeg_signature(FILE* f) {
    unsigned char sig[2];
    size_t n = std::fread(sig, 1, 2, f);
    std::rewind(f);
    return n == 2 && sig[0] == 0xFF && sig[1] == 0xD8;
}

constexpr char kScalarMagic[4] = {'G', 'D', 'H', 'F'};
constexpr uint32_t kScalarVersion = 1;

void put_u32(std::vector<uint8_t>& buf, uint32_t v) {
    buf.push_back(static_cast<uint8_t>(v & 0xff));
    buf.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
    buf.push_back(static_cast<uint8_t>((v >> 16) & 0xff));
    buf.push_back(static_cast<uint8_t>((v >> 24) & 0xff));
}

uint32_t get_u32(const uint8_t* p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

}  // namespace

ImageBuffer load_image(const std::string& path) {
    FilePtr f = open_file(path, "rb");
    if (has_png_signature(f.get())) return decode_png(f.get(), path);
    if (has_jpeg_signature(f.get())) return decode_jpeg(f.get(), path);
    fail(path, "not a PNG or JPEG file");
}

void save_image(const ImageBuffer& img, const std::string& path) {
    img.validate(path);
    FilePtr f = open_file(path, "wb");

    PngWriter w;
    w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!w.png) fail(path, "png writer allocation failed");
    w.info = png_create_info_struct(w.png);
    if (!w.info) fail(path, "png info allocation failed");
    if (setjmp(png_jmpbuf(w.png))) fail(path, "png encode error");

    png_init_io(w.png, f.get());
    png_set_IHDR(w.png, w.info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);

    std::vector<uint8_t> row(static_cast<size_t>(img.width) * 3);
    for (int y = 0; y < img.height; ++y) {
        for (size_t i = 0; i < row.size(); ++i)
            row[i] = quantize(img.data[static_cast<size_t>(y) * img.width * 3 + i]);
        png_write_row(w.png, row.data());
    }
    png_write_end(w.png, nullptr);
}

ScalarMap load_scalar_f32(const std::string& path) {
    FilePtr f = open_file(path, "rb");
    uint8_t header[16];
    if (std::fread(header, 1, 16, f.get()) != 16) fail(path, "truncated scalar header");
    if (std::memcmp(header, kScalarMagic, 4) != 0) fail(path, "bad scalar magic");
    uint32_t version = get_u32(header + 4);
    if (version != kScalarVersion) fail(path, "unsupported scalar version");
    uint32_t w = get_u32(header + 8);
    uint32_t h = get_u32(header + 12);
    if (w < 1 || h < 1 || w > (1u << 20) || h > (1u << 20)) fail(path, "bad scalar dimensions");

    std::vector<float> raw(static_cast<size_t>(w) * h);
    if (std::fread(raw.data(), sizeof(float), raw.size(), f.get()) != raw.size())
        fail(path, "truncated scalar payload");

    ScalarMap map(static_cast<int>(w), static_cast<int>(h));
    for (size_t i = 0; i < raw.size(); ++i) map.data[i] = raw[i];
    return map;
}

void save_scalar_f32(const ScalarMap& map, const std::string& path) {
    if (map.width < 1 || map.height < 1 || map.data.size() != map.size())
        fail(path, "inconsistent scalar map");
    std::vector<uint8_t> header;
    header.insert(header.end(), kScalarMagic, kScalarMagic + 4);
    put_u32(header, kScalarVersion);
    put_u32(header, static_cast<uint32_t>(map.width));
    put_u32(header, static_cast<uint32_t>(map.height));

    std::vector<float> raw(map.size());
    for (size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<float>(map.data[i]);

    FilePtr f = open_file(path, "wb");
    if (std::fwrite(header.data(), 1, header.size(), f.get()) != header.size() ||
        std::fwrite(raw.data(), sizeof(float), raw.size(), f.get()) != raw.size())
        fail(path, "short write");
}

ScalarMap load_scalar_png16(const std::string& path) {
    FilePtr f = open_file(path, "rb");
    if (!has_png_signature(f.get())) fail(path, "not a PNG file");

    PngReader r;
    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!r.png) fail(path, "png reader allocation failed");
    r.info = png_create_info_struct(r.png);
    if (!r.info) fail(path, "png info allocation failed");
    if (setjmp(png_jmpbuf(r.png))) fail(path, "png decode error");

    png_init_io(r.png, f.get());
    png_read_info(r.png, r.info);
    if (png_get_color_type(r.png, r.info) != PNG_COLOR_TYPE_GRAY ||
        png_get_bit_depth(r.png, r.info) != 16)
        fail(path, "expected 16-bit grayscale PNG");
    png_set_swap(r.png);  // stored big-endian
    png_read_update_info(r.png, r.info);

    int w = static_cast<int>(png_get_image_width(r.png, r.info));
    int h = static_cast<int>(png_get_image_height(r.png, r.info));
    std::vector<uint16_t> rows(static_cast<size_t>(w) * h);
    std::vector<png_bytep> row_ptrs(h);
    for (int y = 0; y < h; ++y)
        row_ptrs[y] = reinterpret_cast<png_bytep>(rows.data() + static_cast<size_t>(y) * w);
    png_read_image(r.png, row_ptrs.data());
    png_read_end(r.png, nullptr);

    ScalarMap map(w, h);
    for (size_t i = 0; i < rows.size(); ++i) map.data[i] = rows[i] / 65535.0;
    return map;
}

void save_scalar_png16(const ScalarMap& map, const std::string& path) {
    if (map.width < 1 || map.height < 1 || map.data.size() != map.size())
        fail(path, "inconsistent scalar map");
    FilePtr f = open_file(path, "wb");

    PngWriter w;
    w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!w.png) fail(path, "png writer allocation failed");
    w.info = png_create_info_struct(w.png);
    if (!w.info) fail(path, "png info allocation failed");
    if (setjmp(png_jmpbuf(w.png))) fail(path, "png encode error");

    png_init_io(w.png, f.get());
    png_set_IHDR(w.png, w.info, map.width, map.height, 16, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);
    png_set_swap(w.png);

    std::vector<uint16_t> row(static_cast<size_t>(map.width));
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            double v = std::clamp(map.at(x, y), 0.0, 1.0);
            row[x] = static_cast<uint16_t>(std::lround(v * 65535.0));
        }
        png_write_row(w.png, reinterpret_cast<png_bytep>(row.data()));
    }
    png_write_end(w.png, nullptr);
}

}  // namespace gdh
