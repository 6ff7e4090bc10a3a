#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "samo/nn/dense_net.hpp"

namespace samo::nn {

// Little-endian primitives shared by every binary file in the project.
void write_u32(std::ostream& out, std::uint32_t v);
void write_u64(std::ostream& out, std::uint64_t v);
void write_f64(std::ostream& out, double v);
std::uint32_t read_u32(std::istream& in);
std::uint64_t read_u64(std::istream& in);
double read_f64(std::istream& in);

// Net fragment: u32 size count, u32 layer sizes, u32 hidden activation code,
// then every parameter as f64 in DenseNet::params() order.
void write_net(std::ostream& out, const DenseNet& net);
DenseNet read_net(std::istream& in);

}  // namespace samo::nn
