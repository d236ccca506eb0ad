#include "rcslasso/io.hpp"

#include <bit>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

// Raw float64 payloads are written without byte swapping; the formats are
// specified little-endian.
static_assert(std::endian::native == std::endian::little,
              "binary stream formats require a little-endian host");

namespace rcslasso {

namespace {

using nlohmann::json;

void write_doubles(std::ofstream& out, const double* data, std::size_t count) {
  out.write(reinterpret_cast<const char*>(data),
            static_cast<std::streamsize>(count * sizeof(double)));
}

std::ofstream open_binary_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_binary_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  return in;
}

json read_sidecar(const std::filesystem::path& path) {
  const auto side = sidecar_path(path);
  std::ifstream in(side);
  if (!in) throw std::runtime_error("missing sidecar header: " + side.string());
  json header = json::parse(in, nullptr, /*allow_exceptions=*/true);
  if (header.value("format_version", -1) != kFormatVersion)
    throw std::runtime_error("unsupported format_version in " + side.string());
  return header;
}

void write_sidecar(const std::filesystem::path& path, const json& header) {
  const auto side = sidecar_path(path);
  std::ofstream out(side, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + side.string());
  out << header.dump(2) << '\n';
}

std::uintmax_t payload_size(const std::filesystem::path& path) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw std::runtime_error("cannot stat: " + path.string());
  return size;
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  std::filesystem::path side = path;
  side += ".json";
  return side;
}

void write_stream(const std::filesystem::path& path, const StreamSource& stream) {
  if (static_cast<std::size_t>(stream.values.size()) != stream.length)
    throw std::invalid_argument("write_stream: length does not match values");
  auto out = open_binary_out(path);
  write_doubles(out, stream.values.data(), stream.length);
  if (!out) throw std::runtime_error("write failed: " + path.string());
  write_sidecar(path, json{{"N", stream.length},
                           {"S", stream.sparsity},
                           {"sigma", stream.sigma},
                           {"seed", stream.seed},
                           {"format_version", kFormatVersion}});
}

StreamSource read_stream(const std::filesystem::path& path) {
  const json header = read_sidecar(path);
  StreamSource stream;
  stream.length = header.at("N").get<std::size_t>();
  stream.sparsity = header.at("S").get<double>();
  stream.sigma = header.at("sigma").get<double>();
  stream.seed = header.at("seed").get<std::uint64_t>();

  if (payload_size(path) != stream.length * sizeof(double))
    throw std::runtime_error("stream payload size disagrees with header N: " +
                             path.string());
  auto in = open_binary_in(path);
  stream.values.resize(static_cast<Eigen::Index>(stream.length));
  in.read(reinterpret_cast<char*>(stream.values.data()),
          static_cast<std::streamsize>(stream.length * sizeof(double)));
  if (!in) throw std::runtime_error("short read: " + path.string());
  return stream;
}

void write_measurements(const std::filesystem::path& path,
                        const MeasurementDump& dump) {
  if (dump.m <= 0 || dump.n <= 0)
    throw std::invalid_argument("write_measurements: empty dimensions");
  for (const auto& y : dump.windows)
    if (y.size() != dump.m)
      throw std::invalid_argument("write_measurements: window size mismatch");
  auto out = open_binary_out(path);
  for (const auto& y : dump.windows)
    write_doubles(out, y.data(), static_cast<std::size_t>(dump.m));
  if (!out) throw std::runtime_error("write failed: " + path.string());
  write_sidecar(path, json{{"n", dump.n},
                           {"m", dump.m},
                           {"lambda", dump.lambda},
                           {"gamma", dump.gamma},
                           {"seed", dump.seed},
                           {"format_version", kFormatVersion}});
}

MeasurementDump read_measurements(const std::filesystem::path& path) {
  const json header = read_sidecar(path);
  MeasurementDump dump;
  dump.n = header.at("n").get<Eigen::Index>();
  dump.m = header.at("m").get<Eigen::Index>();
  dump.lambda = header.at("lambda").get<double>();
  dump.gamma = header.at("gamma").get<double>();
  dump.seed = header.at("seed").get<std::uint64_t>();
  if (dump.m <= 0 || dump.n <= 0)
    throw std::runtime_error("measurement header has empty dimensions: " +
                             path.string());

  const auto bytes = payload_size(path);
  const auto window_bytes = static_cast<std::uintmax_t>(dump.m) * sizeof(double);
  if (bytes % window_bytes != 0)
    throw std::runtime_error(
        "measurement payload is not a whole number of windows: " +
        path.string());
  const auto count = bytes / window_bytes;

  auto in = open_binary_in(path);
  dump.windows.resize(count);
  for (auto& y : dump.windows) {
    y.resize(dump.m);
    in.read(reinterpret_cast<char*>(y.data()),
            static_cast<std::streamsize>(window_bytes));
  }
  if (!in) throw std::runtime_error("short read: " + path.string());
  return dump;
}

}  // namespace rcslasso
