#include "samo/nn/serialize.hpp"

#include <array>
#include <bit>
#include <cstring>

#include "samo/errors.hpp"

namespace samo::nn {

namespace {

template <typename T>
void write_le(std::ostream& out, T v) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t k = 0; k < sizeof(T); ++k) {
    bytes[k] = static_cast<char>((v >> (8 * k)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T read_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw FormatError("unexpected end of binary stream");
  T v = 0;
  for (std::size_t k = 0; k < sizeof(T); ++k) v |= static_cast<T>(bytes[k]) << (8 * k);
  return v;
}

constexpr std::uint32_t kMaxLayers = 64;
constexpr std::uint32_t kMaxWidth = 1u << 20;

}  // namespace

void write_u32(std::ostream& out, std::uint32_t v) { write_le(out, v); }
void write_u64(std::ostream& out, std::uint64_t v) { write_le(out, v); }
void write_f64(std::ostream& out, double v) { write_le(out, std::bit_cast<std::uint64_t>(v)); }
std::uint32_t read_u32(std::istream& in) { return read_le<std::uint32_t>(in); }
std::uint64_t read_u64(std::istream& in) { return read_le<std::uint64_t>(in); }
double read_f64(std::istream& in) { return std::bit_cast<double>(read_le<std::uint64_t>(in)); }

void write_net(std::ostream& out, const DenseNet& net) {
  write_u32(out, static_cast<std::uint32_t>(net.layer_sizes().size()));
  for (int s : net.layer_sizes()) write_u32(out, static_cast<std::uint32_t>(s));
  write_u32(out, static_cast<std::uint32_t>(net.hidden_activation()));
  for (double p : net.params()) write_f64(out, p);
}

DenseNet read_net(std::istream& in) {
  const std::uint32_t count = read_u32(in);
  if (count < 2 || count > kMaxLayers) throw FormatError("net fragment: bad layer count");
  std::vector<int> sizes;
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::uint32_t s = read_u32(in);
    if (s == 0 || s > kMaxWidth) throw FormatError("net fragment: bad layer size");
    sizes.push_back(static_cast<int>(s));
  }
  const std::uint32_t act = read_u32(in);
  if (act > static_cast<std::uint32_t>(Activation::kRelu)) {
    throw FormatError("net fragment: unknown activation code");
  }
  DenseNet net(std::move(sizes), static_cast<Activation>(act));
  for (double& p : net.params()) p = read_f64(in);
  return net;
}

}  // namespace samo::nn
