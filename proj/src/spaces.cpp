#include "confdim/spaces.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace confdim {

namespace {

constexpr const char* kMagic = "confdim-space v1";
constexpr double kPi = 3.14159265358979323846;

int ipow(int base, int exp) {
  int r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

// Cell indices of the level-n carpet: pairs (i, j) whose base-3 digits are
// never both 1 at the same position.
void carpet_cells(int level, std::vector<std::pair<int, int>>& out) {
  int side = ipow(3, level);
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j) {
      int a = i, b = j;
      bool keep = true;
      for (int k = 0; k < level; ++k) {
        if (a % 3 == 1 && b % 3 == 1) {
          keep = false;
          break;
        }
        a /= 3;
        b /= 3;
      }
      if (keep) out.emplace_back(i, j);
    }
}

// Left endpoints (as integer 3-adic prefixes) of the level-n Cantor cells,
// in increasing order.
void cantor_cells(int level, std::vector<int>& out) {
  out.assign(1, 0);
  for (int k = 0; k < level; ++k) {
    std::vector<int> next;
    next.reserve(out.size() * 2);
    for (int c : out) {
      next.push_back(c * 3);
      next.push_back(c * 3 + 2);
    }
    out.swap(next);
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Carpet: return "carpet";
    case SpaceKind::ThirdCantor: return "third_cantor";
    case SpaceKind::CantorProduct: return "cantor_product";
    case SpaceKind::Interval: return "interval";
    case SpaceKind::Circle: return "circle";
    case SpaceKind::Square: return "square";
    case SpaceKind::File: return "file";
  }
  return "carpet";
}

SpaceKind space_kind_from_string(const std::string& name) {
  if (name == "carpet") return SpaceKind::Carpet;
  if (name == "third_cantor") return SpaceKind::ThirdCantor;
  if (name == "cantor_product") return SpaceKind::CantorProduct;
  if (name == "interval") return SpaceKind::Interval;
  if (name == "circle") return SpaceKind::Circle;
  if (name == "square") return SpaceKind::Square;
  if (name == "file") return SpaceKind::File;
  throw std::invalid_argument("unknown space kind: " + name);
}

std::string SpaceSpec::describe() const {
  std::ostringstream os;
  os << to_string(kind);
  switch (kind) {
    case SpaceKind::Carpet:
    case SpaceKind::ThirdCantor: os << "(" << level << ")"; break;
    case SpaceKind::CantorProduct: os << "(" << level << "," << grid << ")"; break;
    case SpaceKind::Interval:
    case SpaceKind::Circle:
    case SpaceKind::Square: os << "(" << grid << ")"; break;
    case SpaceKind::File: os << "(" << path << ")"; break;
  }
  return os.str();
}

FiniteMetricSpace generate(const SpaceSpec& spec) {
  if (spec.kind != SpaceKind::File) {
    if (spec.level < 0) throw std::invalid_argument("level must be >= 0");
    if (spec.grid < 2) throw std::invalid_argument("grid must be >= 2");
  }
  switch (spec.kind) {
    case SpaceKind::Carpet: {
      std::vector<std::pair<int, int>> cells;
      carpet_cells(spec.level, cells);
      double side = ipow(3, spec.level);
      std::vector<double> coords;
      coords.reserve(cells.size() * 2);
      for (auto [i, j] : cells) {
        coords.push_back((i + 0.5) / side);
        coords.push_back((j + 0.5) / side);
      }
      double cell = 1.0 / side;
      double h = spec.metric == MetricKind::Sup ? cell / 2.0 : cell * std::sqrt(2.0) / 2.0;
      return FiniteMetricSpace::from_coords(std::move(coords), 2, spec.metric, h);
    }
    case SpaceKind::ThirdCantor: {
      std::vector<int> cells;
      cantor_cells(spec.level, cells);
      double side = ipow(3, spec.level);
      std::vector<double> coords;
      for (int c : cells) coords.push_back((c + 0.5) / side);
      return FiniteMetricSpace::from_coords(std::move(coords), 1, spec.metric,
                                            0.5 / side);
    }
    case SpaceKind::CantorProduct: {
      std::vector<int> cells;
      cantor_cells(spec.level, cells);
      double side = ipow(3, spec.level);
      double dy = 1.0 / (spec.grid - 1);
      std::vector<double> coords;
      coords.reserve(cells.size() * spec.grid * 2);
      for (int c : cells)
        for (int g = 0; g < spec.grid; ++g) {
          coords.push_back((c + 0.5) / side);
          coords.push_back(g * dy);
        }
      double hx = 0.5 / side, hy = dy / 2.0;
      double h = spec.metric == MetricKind::Sup ? std::max(hx, hy) : std::hypot(hx, hy);
      return FiniteMetricSpace::from_coords(std::move(coords), 2, spec.metric, h);
    }
    case SpaceKind::Interval: {
      double dx = 1.0 / (spec.grid - 1);
      std::vector<double> coords;
      for (int g = 0; g < spec.grid; ++g) coords.push_back(g * dx);
      return FiniteMetricSpace::from_coords(std::move(coords), 1, spec.metric, dx / 2.0);
    }
    case SpaceKind::Circle: {
      std::vector<double> coords;
      for (int g = 0; g < spec.grid; ++g) {
        double t = 2.0 * kPi * g / spec.grid;
        coords.push_back(std::cos(t));
        coords.push_back(std::sin(t));
      }
      double h = kPi / spec.grid;  // half arc spacing, an upper bound on density
      return FiniteMetricSpace::from_coords(std::move(coords), 2, spec.metric, h);
    }
    case SpaceKind::Square: {
      double dx = 1.0 / (spec.grid - 1);
      std::vector<double> coords;
      coords.reserve(static_cast<size_t>(spec.grid) * spec.grid * 2);
      for (int i = 0; i < spec.grid; ++i)
        for (int j = 0; j < spec.grid; ++j) {
          coords.push_back(i * dx);
          coords.push_back(j * dx);
        }
      double h = spec.metric == MetricKind::Sup ? dx / 2.0 : dx * std::sqrt(2.0) / 2.0;
      return FiniteMetricSpace::from_coords(std::move(coords), 2, spec.metric, h);
    }
    case SpaceKind::File: {
      // bare ingestion formats dispatch on extension; everything else is
      // the versioned space format
      auto dot = spec.path.rfind('.');
      std::string ext = dot == std::string::npos ? "" : spec.path.substr(dot);
      if (ext == ".csv") return load_point_rows(spec.path, spec.metric, spec.file_h);
      if (ext == ".mat" || ext == ".dist") return load_matrix_file(spec.path, spec.file_h);
      return load_space(spec.path);
    }
  }
  throw std::logic_error("unreachable");
}

void write_space(const FiniteMetricSpace& X, std::ostream& out) {
  out << kMagic << "\n";
  out << "metric " << to_string(X.metric()) << "\n";
  out << "h " << fmt(X.resolution()) << "\n";
  if (X.has_coords()) {
    out << "points " << X.size() << " dim " << X.dim() << "\n";
    for (PointId p = 0; p < X.size(); ++p) {
      out << p;
      for (int k = 0; k < X.dim(); ++k) out << "," << fmt(X.coord(p, k));
      out << "\n";
    }
  } else {
    out << "matrix " << X.size() << "\n";
    for (PointId i = 0; i < X.size(); ++i) {
      for (PointId j = 0; j < X.size(); ++j)
        out << (j ? " " : "") << fmt(X.distance(i, j));
      out << "\n";
    }
  }
}

FiniteMetricSpace read_space(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMagic)
    throw std::runtime_error("space file: bad or missing format header");
  std::string word, metric_name;
  std::istringstream ls;
  auto next_line = [&](const std::string& expect) {
    if (!std::getline(in, line)) throw std::runtime_error("space file: truncated");
    ls.clear();
    ls.str(line);
    ls >> word;
    if (word != expect) throw std::runtime_error("space file: expected '" + expect + "'");
  };
  next_line("metric");
  ls >> metric_name;
  MetricKind kind = metric_kind_from_string(metric_name);
  next_line("h");
  double h;
  if (!(ls >> h)) throw std::runtime_error("space file: bad h");
  if (!std::getline(in, line)) throw std::runtime_error("space file: truncated");
  ls.clear();
  ls.str(line);
  ls >> word;
  if (word == "points") {
    int n, dim;
    std::string dimword;
    if (!(ls >> n >> dimword >> dim) || dimword != "dim")
      throw std::runtime_error("space file: bad points header");
    std::vector<double> coords;
    coords.reserve(static_cast<size_t>(n) * dim);
    for (int i = 0; i < n; ++i) {
      if (!std::getline(in, line)) throw std::runtime_error("space file: truncated");
      std::istringstream row(line);
      std::string field;
      if (!std::getline(row, field, ',')) throw std::runtime_error("space file: bad row");
      for (int k = 0; k < dim; ++k) {
        if (!std::getline(row, field, ','))
          throw std::runtime_error("space file: bad row: " + line);
        coords.push_back(std::stod(field));
      }
    }
    return FiniteMetricSpace::from_coords(std::move(coords), dim, kind, h);
  }
  if (word == "matrix") {
    int n;
    if (!(ls >> n)) throw std::runtime_error("space file: bad matrix header");
    std::vector<double> m;
    m.reserve(static_cast<size_t>(n) * n);
    double v;
    for (int i = 0; i < n; ++i) {
      if (!std::getline(in, line)) throw std::runtime_error("space file: truncated");
      std::istringstream row(line);
      for (int j = 0; j < n; ++j) {
        if (!(row >> v)) throw std::runtime_error("space file: truncated matrix row");
        m.push_back(v);
      }
    }
    return FiniteMetricSpace::from_matrix(std::move(m), n, h);
  }
  throw std::runtime_error("space file: unknown section '" + word + "'");
}

void save_space(const FiniteMetricSpace& X, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  write_space(X, f);
  if (!f) throw std::runtime_error("write failed: " + path);
}

FiniteMetricSpace load_space(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  return read_space(f);
}

FiniteMetricSpace load_point_rows(const std::string& path, MetricKind kind, double h) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::string line;
  std::vector<double> coords;
  int dim = -1;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string field;
    std::vector<double> vals;
    bool first = true;
    while (std::getline(row, field, ',')) {
      if (first) {
        first = false;  // id column, ignored (ids are positional)
        continue;
      }
      vals.push_back(std::stod(field));
    }
    if (vals.size() < 1 || vals.size() > 3)
      throw std::runtime_error("malformed point row: " + line);
    if (dim == -1) dim = static_cast<int>(vals.size());
    if (static_cast<int>(vals.size()) != dim)
      throw std::runtime_error("inconsistent row width: " + line);
    coords.insert(coords.end(), vals.begin(), vals.end());
  }
  if (dim <= 0) throw std::runtime_error("no points in " + path);
  return FiniteMetricSpace::from_coords(std::move(coords), dim, kind, h);
}

FiniteMetricSpace load_matrix_file(const std::string& path, double h) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  int n;
  if (!(f >> n) || n <= 0) throw std::runtime_error("matrix file: bad header");
  std::vector<double> m;
  m.reserve(static_cast<size_t>(n) * n);
  double v;
  for (long i = 0; i < static_cast<long>(n) * n; ++i) {
    if (!(f >> v)) throw std::runtime_error("matrix file: truncated");
    m.push_back(v);
  }
  return FiniteMetricSpace::from_matrix(std::move(m), n, h);
}

}  // namespace confdim
