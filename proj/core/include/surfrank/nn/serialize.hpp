#pragma once

#include <filesystem>
#include <iosfwd>

#include "surfrank/nn/network.hpp"

namespace surfrank::nn {

/// Text format, version 1:
///
///   surfrank-network v1
///   seed <unsigned>
///   layers <count>
///   layer <kind> <units> <activation> <skip> <l1> <l2> <rank> <extent>...   (one line per layer)
///   params <layer index> <rows> <cols>                                      (per parameterized layer)
///   <rows*cols weights, row-major, one line>
///   <cols biases, one line>
///   end
///
/// Every real is written as a C99 hexadecimal float, so a save/load round
/// trip reproduces every bit.
void save_network(const Network& net, std::ostream& out);
Network load_network(std::istream& in);

void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

}  // namespace surfrank::nn
