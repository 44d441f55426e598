#include "vdcs/jpeg_codec.hpp"

#include <csetjmp>
#include <cstdio>

#include <jerror.h>
#include <jpeglib.h>

#include "vdcs/errors.hpp"

namespace vdcs {

namespace {

struct JpegErrorMgr {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

void jpeg_silent_emit(j_common_ptr, int) {}

}  // namespace

std::vector<std::uint8_t> jpeg_encode(const Image8& img, int quality) {
  if (quality < 1 || quality > 100) throw ValidationError("JPEG quality must lie in [1,100]");

  jpeg_compress_struct cinfo;
  JpegErrorMgr err;
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;
  err.pub.emit_message = jpeg_silent_emit;

  unsigned char* buffer = nullptr;
  unsigned long buffer_size = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    if (buffer) std::free(buffer);
    throw IoError(std::string("JPEG encode failed: ") + err.message);
  }

  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &buffer, &buffer_size);
  cinfo.image_width = static_cast<JDIMENSION>(img.width);
  cinfo.image_height = static_cast<JDIMENSION>(img.height);
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  // Defaults give 2x2,1x1,1x1 sampling (4:2:0); force_baseline pins
  // baseline sequential with 8-bit quantization entries.
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);

  const auto stride = static_cast<std::size_t>(img.width) * 3;
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPROW>(img.data.data() + cinfo.next_scanline * stride);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);

  std::vector<std::uint8_t> out(buffer, buffer + buffer_size);
  std::free(buffer);
  return out;
}

Image8 jpeg_roundtrip(const Image8& img, int quality) {
  const std::vector<std::uint8_t> encoded = jpeg_encode(img, quality);

  jpeg_decompress_struct dinfo;
  JpegErrorMgr err;
  dinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;
  err.pub.emit_message = jpeg_silent_emit;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&dinfo);
    throw IoError(std::string("JPEG decode failed: ") + err.message);
  }

  jpeg_create_decompress(&dinfo);
  jpeg_mem_src(&dinfo, encoded.data(), static_cast<unsigned long>(encoded.size()));
  jpeg_read_header(&dinfo, TRUE);
  dinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&dinfo);
  if (dinfo.output_components != 3 || static_cast<int>(dinfo.output_width) != img.width ||
      static_cast<int>(dinfo.output_height) != img.height) {
    jpeg_destroy_decompress(&dinfo);
    throw IoError("JPEG decode produced unexpected shape");
  }

  Image8 out(img.height, img.width);
  const auto stride = static_cast<std::size_t>(img.width) * 3;
  while (dinfo.output_scanline < dinfo.output_height) {
    JSAMPROW row = out.data.data() + dinfo.output_scanline * stride;
    jpeg_read_scanlines(&dinfo, &row, 1);
  }
  jpeg_finish_decompress(&dinfo);
  jpeg_destroy_decompress(&dinfo);
  return out;
}

std::string jpeg_library_version() {
#ifdef LIBJPEG_TURBO_VERSION_NUMBER
  return "libjpeg-turbo/" + std::to_string(LIBJPEG_TURBO_VERSION_NUMBER) +
         " (api " + std::to_string(JPEG_LIB_VERSION) + ")";
#else
  return "libjpeg api " + std::to_string(JPEG_LIB_VERSION);
#endif
}

}  // namespace vdcs
