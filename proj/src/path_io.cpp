#include "multifrac/path_io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace multifrac {

void write_path_csv(const SamplePath& path, std::ostream& os) {
  os << "t,value\n" << std::setprecision(17);
  for (Eigen::Index k = 0; k < path.values.size(); ++k) os << path.time(k) << ',' << path.values[k] << '\n';
}

void write_path_json(const SamplePath& path, std::ostream& os) {
  nlohmann::json j;
  j["t0"] = path.t0;
  j["t1"] = path.t1;
  j["n"] = path.n;
  j["meta"] = {{"seed", path.meta.seed}, {"eps", path.meta.eps}, {"description", path.meta.description},
               {"extra", path.meta.extra}};
  auto& jumps = j["jumps"] = nlohmann::json::array();
  for (const JumpRecord& r : path.jumps) jumps.push_back({r.time, r.size});
  os << std::setprecision(17) << j.dump(1) << '\n';
}

SamplePath read_path(std::istream& csv, std::istream* sidecar) {
  std::string line;
  if (!std::getline(csv, line) || line.rfind("t,value", 0) != 0) fail(ErrorKind::Parse, "path CSV must start with 't,value'");
  std::vector<double> ts;
  std::vector<double> vs;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(ErrorKind::Parse, "malformed CSV row: " + line);
    try {
      ts.push_back(std::stod(line.substr(0, comma)));
      vs.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      fail(ErrorKind::Parse, "malformed CSV row: " + line);
    }
  }
  if (ts.size() < 2) fail(ErrorKind::Parse, "path CSV needs at least two rows");
  SamplePath p;
  p.t0 = ts.front();
  p.t1 = ts.back();
  p.n = std::llround(static_cast<double>(ts.size() - 1) / (p.t1 - p.t0));
  p.values = Eigen::Map<Vector>(vs.data(), static_cast<Eigen::Index>(vs.size()));
  if (sidecar) {
    nlohmann::json j;
    try {
      *sidecar >> j;
      p.meta.seed = j.at("meta").at("seed").get<std::uint64_t>();
      p.meta.eps = j.at("meta").at("eps").get<double>();
      p.meta.description = j.at("meta").at("description").get<std::string>();
      p.meta.extra = j.at("meta").at("extra").get<std::map<std::string, std::string>>();
      for (const auto& r : j.at("jumps")) p.jumps.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
      p.n = j.at("n").get<std::int64_t>();
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::Parse, std::string("path sidecar: ") + e.what());
    }
  }
  return p;
}

void save_path(const SamplePath& path, const std::string& csv_file, const std::string& json_file) {
  std::ofstream csv(csv_file);
  std::ofstream js(json_file);
  if (!csv || !js) fail(ErrorKind::Precondition, "cannot open output files " + csv_file + ", " + json_file);
  write_path_csv(path, csv);
  write_path_json(path, js);
}

SamplePath load_path(const std::string& csv_file, const std::string& json_file) {
  std::ifstream csv(csv_file);
  if (!csv) fail(ErrorKind::Parse, "cannot read " + csv_file);
  if (json_file.empty()) return read_path(csv);
  std::ifstream js(json_file);
  if (!js) fail(ErrorKind::Parse, "cannot read " + json_file);
  return read_path(csv, &js);
}

}  // namespace multifrac
