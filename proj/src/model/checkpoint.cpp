#include "kanbench/model/checkpoint.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace kanbench {
namespace {

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::istringstream line(std::string_view expected_tag) {
    std::string text;
    do {
      if (!std::getline(in_, text)) fail("unexpected end of file, wanted '" + std::string(expected_tag) + "'");
      ++line_no_;
    } while (text.empty());
    std::istringstream ss(text);
    std::string tag;
    ss >> tag;
    if (tag != expected_tag) fail("expected '" + std::string(expected_tag) + "', found '" + tag + "'");
    return ss;
  }

  double real(std::istringstream& ss) {
    std::string tok;
    if (!(ss >> tok)) fail("missing real value");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    // ERANGE on underflow still yields the correctly rounded subnormal.
    if (end != tok.c_str() + tok.size() || (errno == ERANGE && std::isinf(v))) fail("bad real '" + tok + "'");
    return v;
  }

  long integer(std::istringstream& ss) {
    long v;
    if (!(ss >> v)) fail("missing integer");
    return v;
  }

  std::string word(std::istringstream& ss) {
    std::string w;
    if (!(ss >> w)) fail("missing word");
    return w;
  }

  void end_of_line(std::istringstream& ss) {
    std::string extra;
    if (ss >> extra) fail("trailing token '" + extra + "'");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw CheckpointError("checkpoint line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

void save_kan(const KanNetwork& net, std::ostream& out) {
  out << "layers " << net.layers().size() << '\n';
  for (const auto& layer : net.layers()) {
    out << "layer " << layer.in_dim() << ' ' << layer.out_dim() << '\n';
    for (const auto& e : layer.edges()) {
      const auto& g = e.spline.grid();
      out << "edge " << hex(e.w_b) << ' ' << hex(e.w_s) << ' ' << hex(g.lo()) << ' '
          << hex(g.hi()) << ' ' << g.intervals() << ' ' << g.degree();
      for (double c : e.spline.coefficients()) out << ' ' << hex(c);
      out << '\n';
    }
  }
}

void save_mlp(const MlpNetwork& net, std::ostream& out) {
  out << "layers " << net.layers().size() << '\n';
  for (const auto& layer : net.layers()) {
    out << "layer " << layer.in_dim() << ' ' << layer.out_dim() << ' '
        << to_string(layer.activation) << '\n';
    out << "weights";
    for (double w : layer.weights.data()) out << ' ' << hex(w);
    out << "\nbias";
    for (double b : layer.bias) out << ' ' << hex(b);
    out << '\n';
  }
}

KanNetwork load_kan(Reader& r, long layer_count) {
  std::vector<KanLayer> layers;
  for (long l = 0; l < layer_count; ++l) {
    auto hdr = r.line("layer");
    const long in = r.integer(hdr);
    const long out = r.integer(hdr);
    r.end_of_line(hdr);
    if (in < 1 || out < 1) r.fail("non-positive layer dimension");
    std::vector<EdgeActivation> edges;
    for (long e = 0; e < in * out; ++e) {
      auto ss = r.line("edge");
      const double w_b = r.real(ss);
      const double w_s = r.real(ss);
      const double lo = r.real(ss);
      const double hi = r.real(ss);
      const long intervals = r.integer(ss);
      const long degree = r.integer(ss);
      try {
        KnotGrid grid(lo, hi, static_cast<int>(intervals), static_cast<int>(degree));
        std::vector<double> coef(grid.basis_count());
        for (auto& c : coef) c = r.real(ss);
        r.end_of_line(ss);
        edges.push_back(EdgeActivation{w_b, w_s, SplineFunction(grid, std::move(coef))});
      } catch (const std::invalid_argument& ex) {
        r.fail(ex.what());
      }
    }
    try {
      layers.emplace_back(static_cast<std::size_t>(in), static_cast<std::size_t>(out),
                          std::move(edges));
    } catch (const std::invalid_argument& ex) {
      r.fail(ex.what());
    }
  }
  try {
    return KanNetwork(std::move(layers));
  } catch (const std::invalid_argument& ex) {
    r.fail(ex.what());
  }
}

MlpNetwork load_mlp(Reader& r, long layer_count) {
  std::vector<DenseLayer> layers;
  for (long l = 0; l < layer_count; ++l) {
    auto hdr = r.line("layer");
    const long in = r.integer(hdr);
    const long out = r.integer(hdr);
    const std::string act = r.word(hdr);
    r.end_of_line(hdr);
    if (in < 1 || out < 1) r.fail("non-positive layer dimension");
    DenseLayer layer;
    try {
      layer.activation = parse_activation(act);
    } catch (const std::invalid_argument& ex) {
      r.fail(ex.what());
    }
    auto ws = r.line("weights");
    std::vector<double> w(static_cast<std::size_t>(in * out));
    for (auto& v : w) v = r.real(ws);
    r.end_of_line(ws);
    layer.weights = Matrix(static_cast<std::size_t>(out), static_cast<std::size_t>(in), std::move(w));
    auto bs = r.line("bias");
    layer.bias.resize(static_cast<std::size_t>(out));
    for (auto& v : layer.bias) v = r.real(bs);
    r.end_of_line(bs);
    layers.push_back(std::move(layer));
  }
  try {
    return MlpNetwork(std::move(layers));
  } catch (const std::invalid_argument& ex) {
    r.fail(ex.what());
  }
}

}  // namespace

void save_checkpoint(const Model& model, std::ostream& out) {
  out << "kanbench-checkpoint " << kCheckpointVersion << '\n';
  out << "model " << model_kind(model) << '\n';
  if (const auto* kan = std::get_if<KanNetwork>(&model)) {
    save_kan(*kan, out);
  } else {
    save_mlp(std::get<MlpNetwork>(model), out);
  }
  out << "end\n";
}

Model load_checkpoint(std::istream& in) {
  Reader r(in);
  auto magic = r.line("kanbench-checkpoint");
  const long version = r.integer(magic);
  if (version != kCheckpointVersion) r.fail("unsupported version " + std::to_string(version));
  auto kind_line = r.line("model");
  const std::string kind = r.word(kind_line);
  auto count_line = r.line("layers");
  const long count = r.integer(count_line);
  if (count < 1) r.fail("layer count must be >= 1");

  if (kind != "kan" && kind != "mlp") r.fail("unknown model kind '" + kind + "'");
  Model model = kind == "kan" ? Model(load_kan(r, count)) : Model(load_mlp(r, count));
  r.line("end");
  return model;
}

void save_checkpoint_file(const Model& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CheckpointError("cannot open '" + path + "' for writing");
  save_checkpoint(model, out);
  if (!out) throw CheckpointError("write to '" + path + "' failed");
}

Model load_checkpoint_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot open '" + path + "'");
  return load_checkpoint(in);
}

}  // namespace kanbench
