#include "invlab/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace invlab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw std::invalid_argument(origin + ": " + what);
}

json parse(const std::string& text, const std::string& origin) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(origin, "invalid JSON");
  return j;
}

std::vector<double> real_array(const json& j, const char* field, const std::string& origin) {
  if (!j.contains(field) || !j[field].is_array()) fail(origin, std::string("missing array field '") + field + "'");
  std::vector<double> out;
  for (const auto& x : j[field]) {
    if (!x.is_number()) fail(origin, std::string("field '") + field + "' must contain numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

Vec parse_vector_json(const std::string& text, const std::string& origin) {
  json j = parse(text, origin);
  auto re = real_array(j, "re", origin);
  auto im = real_array(j, "im", origin);
  if (re.size() != im.size()) fail(origin, "'re' and 'im' lengths differ");
  if (j.contains("dim") && j["dim"].get<std::size_t>() != re.size())
    fail(origin, "'dim' does not match amplitude count");
  Vec v(static_cast<int>(re.size()));
  for (std::size_t k = 0; k < re.size(); ++k) v(static_cast<int>(k)) = cplx(re[k], im[k]);
  return v;
}

Mat parse_matrix_json(const std::string& text, const std::string& origin) {
  json j = parse(text, origin);
  if (!j.contains("re") || !j["re"].is_array() || !j.contains("im") || !j["im"].is_array())
    fail(origin, "missing 're'/'im' row arrays");
  const auto& re = j["re"];
  const auto& im = j["im"];
  if (re.size() != im.size() || re.empty()) fail(origin, "'re' and 'im' row counts differ or are empty");
  const std::size_t rows = re.size();
  const std::size_t cols = re[0].size();
  if (j.contains("dim") && j["dim"].get<std::size_t>() != rows)
    fail(origin, "'dim' does not match row count");
  Mat m(static_cast<int>(rows), static_cast<int>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!re[r].is_array() || re[r].size() != cols || !im[r].is_array() || im[r].size() != cols)
      fail(origin, "ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<int>(r), static_cast<int>(c)) =
          cplx(re[r][c].get<double>(), im[r][c].get<double>());
  }
  return m;
}

PureState load_pure_state(const std::string& path) {
  Vec v = parse_vector_json(read_text(path), path);
  try {
    return PureState(std::move(v));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

DensityMatrix load_density_matrix(const std::string& path) {
  Mat m = parse_matrix_json(read_text(path), path);
  try {
    return DensityMatrix(std::move(m));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

Mat load_matrix(const std::string& path) {
  return parse_matrix_json(read_text(path), path);
}

std::string vector_to_json(const Vec& v) {
  json j;
  j["dim"] = v.size();
  json re = json::array();
  json im = json::array();
  for (int k = 0; k < v.size(); ++k) {
    re.push_back(v(k).real());
    im.push_back(v(k).imag());
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j.dump();
}

std::string matrix_to_json(const Mat& m) {
  json j;
  j["dim"] = m.rows();
  json re = json::array();
  json im = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json rr = json::array();
    json ri = json::array();
    for (int c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j.dump();
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace invlab
