#pragma once

#include <filesystem>
#include <iosfwd>

#include "hgr/network.hpp"

namespace hgr::nn {

/// Checkpoint layout: a text header of `key values...` lines
///
///   hgr-checkpoint 1
///   seed <u64>
///   classes <C>
///   bidirectional <0|1>
///   dropout <p>
///   head <count> <width>...
///   branch <index> <enabled> <input_dim> <lstm_hidden> <lstm_layers> <fc_out>   (x3)
///   norm <index> <dims> <mean>... <scale>...                                   (x3)
///   parameters <count>
///   end
///
/// followed by `count` little-endian IEEE-754 doubles in Parameters block
/// order. Text doubles use 17 significant digits so a load/save roundtrip
/// is bit-exact.
void save_checkpoint(const NetworkModel& model, std::ostream& out);
void save_checkpoint(const NetworkModel& model, const std::filesystem::path& path);

/// Throws FormatError on malformed input, IoError if the file cannot be read.
NetworkModel load_checkpoint(std::istream& in);
NetworkModel load_checkpoint(const std::filesystem::path& path);

}  // namespace hgr::nn
