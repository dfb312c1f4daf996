#include "mitodet/core/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include <json.hpp>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "mitodet/core/error.hpp"
#include "mitodet/core/fs.hpp"

namespace mitodet {
namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

std::string describe_depth(int depth) {
  switch (depth) {
    case CV_8U: return "8-bit";
    case CV_8S: return "8-bit signed";
    case CV_16U: return "16-bit";
    case CV_16S: return "16-bit signed";
    case CV_32S: return "32-bit integer";
    case CV_32F: return "32-bit float";
    case CV_64F: return "64-bit float";
    default: return "unknown depth";
  }
}

cv::Mat decode(const std::filesystem::path& path) {
  if (!is_supported_image(path)) {
    fail(ErrorKind::kUnsupportedFormat,
         "unsupported format: " + path.string() + " (expected PNG or TIFF)");
  }
  const auto bytes = read_file(path);
  cv::Mat mat;
  try {
    mat = cv::imdecode(cv::Mat(1, static_cast<int>(bytes.size()), CV_8U,
                               const_cast<std::uint8_t*>(bytes.data())),
                       cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    fail(ErrorKind::kUnsupportedFormat, "unsupported format: " + path.string() + ": " + e.what());
  }
  if (mat.empty()) fail(ErrorKind::kUnsupportedFormat, "unsupported format: cannot decode " + path.string());
  return mat;
}

double sidecar_mpp(const std::filesystem::path& path) {
  auto sidecar = path;
  sidecar += ".json";
  std::error_code ec;
  if (!std::filesystem::is_regular_file(sidecar, ec)) return kDefaultMpp;
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(read_text(sidecar));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, sidecar.string() + ": " + e.what());
  }
  if (!meta.is_object() || !meta.contains("mpp") || !meta["mpp"].is_number() ||
      !(meta["mpp"].get<double>() > 0.0)) {
    fail(ErrorKind::kParse, sidecar.string() + ": expected {\"mpp\": <positive number>}");
  }
  return meta["mpp"].get<double>();
}

std::vector<std::uint8_t> encode(const cv::Mat& mat) {
  std::vector<std::uint8_t> out;
  if (!cv::imencode(".png", mat, out)) fail(ErrorKind::kIo, "PNG encoding failed");
  return out;
}

}  // namespace

bool is_supported_image(const std::filesystem::path& path) {
  const auto ext = lower_extension(path);
  return ext == ".png" || ext == ".tif" || ext == ".tiff";
}

ImageRGB load_image(const std::filesystem::path& path) {
  const cv::Mat mat = decode(path);
  if (mat.depth() != CV_8U) {
    fail(ErrorKind::kUnsupportedFormat, "unsupported format: " + path.string() + " is " +
                                            describe_depth(mat.depth()) + ", need 8-bit");
  }
  if (mat.channels() != 3) {
    fail(ErrorKind::kUnsupportedFormat, "unsupported format: " + path.string() + " has " +
                                            std::to_string(mat.channels()) +
                                            " channel(s), need 3 (RGB)");
  }
  std::vector<std::uint8_t> data(static_cast<std::size_t>(mat.cols) * mat.rows * 3);
  for (int y = 0; y < mat.rows; ++y) {
    const auto* src = mat.ptr<cv::Vec3b>(y);
    std::uint8_t* dst = data.data() + static_cast<std::size_t>(y) * mat.cols * 3;
    for (int x = 0; x < mat.cols; ++x) {
      // OpenCV decodes to BGR.
      dst[3 * x] = src[x][2];
      dst[3 * x + 1] = src[x][1];
      dst[3 * x + 2] = src[x][0];
    }
  }
  return ImageRGB(mat.cols, mat.rows, std::move(data), sidecar_mpp(path));
}

BinaryMask load_mask(const std::filesystem::path& path) {
  const cv::Mat mat = decode(path);
  if (mat.depth() != CV_8U || mat.channels() != 1) {
    fail(ErrorKind::kUnsupportedFormat, "unsupported format: mask " + path.string() +
                                            " must be 8-bit single channel");
  }
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(mat.cols) * mat.rows);
  for (int y = 0; y < mat.rows; ++y) {
    const auto* src = mat.ptr<std::uint8_t>(y);
    std::transform(src, src + mat.cols, bits.begin() + static_cast<std::ptrdiff_t>(y) * mat.cols,
                   [](std::uint8_t v) { return static_cast<std::uint8_t>(v != 0); });
  }
  return BinaryMask(mat.cols, mat.rows, std::move(bits));
}

std::vector<std::uint8_t> encode_png(const ImageRGB& image) {
  cv::Mat mat(image.height(), image.width(), CV_8UC3);
  for (int y = 0; y < image.height(); ++y) {
    auto* dst = mat.ptr<cv::Vec3b>(y);
    for (int x = 0; x < image.width(); ++x) {
      const std::uint8_t* p = image.pixel(x, y);
      dst[x] = cv::Vec3b(p[2], p[1], p[0]);
    }
  }
  return encode(mat);
}

std::vector<std::uint8_t> encode_png(const BinaryMask& mask) {
  cv::Mat mat(mask.height(), mask.width(), CV_8UC1);
  for (int y = 0; y < mask.height(); ++y) {
    auto* dst = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < mask.width(); ++x) dst[x] = mask.at(x, y) ? 255 : 0;
  }
  return encode(mat);
}

void save_png(const std::filesystem::path& path, const ImageRGB& image) {
  write_file_atomic(path, encode_png(image));
}

void save_png(const std::filesystem::path& path, const BinaryMask& mask) {
  write_file_atomic(path, encode_png(mask));
}

std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    fail(ErrorKind::kNotFound, "not found: directory " + dir.string());
  }
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_supported_image(entry.path())) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mitodet
