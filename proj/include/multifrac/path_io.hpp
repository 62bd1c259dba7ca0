#ifndef MULTIFRAC_PATH_IO_HPP
#define MULTIFRAC_PATH_IO_HPP

#include "multifrac/levy_path.hpp"

#include <iosfwd>
#include <string>

namespace multifrac {

/// CSV with header "t,value" and 17 significant digits per number.
void write_path_csv(const SamplePath& path, std::ostream& os);
/// JSON sidecar: {"t0","t1","n","meta":{...},"jumps":[[time,size],...]}.
void write_path_json(const SamplePath& path, std::ostream& os);

/// Reads a CSV written by write_path_csv; the sidecar, when given, restores jumps and meta.
SamplePath read_path(std::istream& csv, std::istream* sidecar = nullptr);

void save_path(const SamplePath& path, const std::string& csv_file, const std::string& json_file);
SamplePath load_path(const std::string& csv_file, const std::string& json_file = "");

}  // namespace multifrac

#endif  // MULTIFRAC_PATH_IO_HPP
