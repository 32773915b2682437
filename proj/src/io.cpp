#include "cnls/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cnls::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string profile_to_csv(const model::WaveProfile& w) {
  std::string out = "x,U,V\n";
  for (int i = 0; i < w.grid.n; ++i) {
    out += format_double(w.grid.x[i]);
    out += ',';
    out += format_double(w.U[i]);
    out += ',';
    out += format_double(w.V[i]);
    out += '\n';
  }
  return out;
}

model::WaveProfile profile_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> xs, us, vs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double v[3];
    const char* p = line.c_str();
    const char* end = p + line.size();
    for (int k = 0; k < 3; ++k) {
      auto [next, ec] = std::from_chars(p, end, v[k]);
      if (ec != std::errc{}) throw std::runtime_error("profile_from_csv: bad number");
      p = next;
      if (k < 2) ++p;  // comma
    }
    xs.push_back(v[0]);
    us.push_back(v[1]);
    vs.push_back(v[2]);
  }
  model::WaveProfile w;
  w.grid.n = int(xs.size());
  w.grid.L = xs.empty() ? 0.0 : -xs.front();
  w.grid.x = std::move(xs);
  w.U = std::move(us);
  w.V = std::move(vs);
  return w;
}

std::string params_to_json(const model::ModelParams& p) {
  nlohmann::ordered_json j;
  j["omega"] = p.omega;
  j["s"] = p.s;
  j["beta1"] = p.beta1;
  j["beta2"] = p.beta2;
  j["mu"] = p.mu;
  j["epsilon"] = p.epsilon;
  return j.dump(2) + "\n";
}

model::ModelParams params_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  model::ModelParams p;
  p.omega = j.at("omega").get<double>();
  p.s = j.at("s").get<double>();
  p.beta1 = j.at("beta1").get<double>();
  p.beta2 = j.at("beta2").get<double>();
  p.mu = j.value("mu", 0.0);
  p.epsilon = j.value("epsilon", 0.0);
  return p;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace cnls::io
