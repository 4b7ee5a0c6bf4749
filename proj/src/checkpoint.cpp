#include "ecmaze/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ecmaze {

namespace {

constexpr const char* kMagic = "ecmaze-checkpoint v1";

void write_tensor(std::ostream& out, const std::string& name, const Tensor& t) {
  out << "tensor " << name << ' ' << t.rank();
  for (int d : t.shape()) out << ' ' << d;
  out << '\n';
  char buf[40];
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%a", t[i]);
    out << buf << (i + 1 == t.size() ? '\n' : ' ');
  }
}

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path), path_(path) {
    if (!in_) throw IoError("checkpoint: cannot open " + path);
  }

  std::string line() {
    std::string l;
    if (!std::getline(in_, l)) {
      throw IoError("checkpoint: unexpected end of " + path_);
    }
    return l;
  }

  // Expects "key value"; returns value.
  std::string field(const std::string& key) {
    const std::string l = line();
    if (l.rfind(key + " ", 0) != 0) {
      throw IoError("checkpoint: expected '" + key + "' in " + path_ +
                    ", got '" + l + "'");
    }
    return l.substr(key.size() + 1);
  }

  Tensor tensor(const std::string& expect_name) {
    std::stringstream header(line());
    std::string tag, name;
    int rank = 0;
    header >> tag >> name >> rank;
    if (tag != "tensor" || name != expect_name || rank < 1) {
      throw IoError("checkpoint: expected tensor " + expect_name + " in " + path_);
    }
    std::vector<int> shape(rank);
    for (int& d : shape) header >> d;
    Tensor t(shape);
    std::stringstream values(line());
    std::string tok;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!(values >> tok)) throw IoError("checkpoint: truncated tensor " + expect_name);
      t[i] = std::strtod(tok.c_str(), nullptr);
    }
    return t;
  }

 private:
  std::ifstream in_;
  std::string path_;
};

void write_mlp(std::ostream& out, const std::string& prefix, const MLPParams& p) {
  out << prefix << ".layers " << p.layers.size() << '\n';
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    write_tensor(out, prefix + "." + std::to_string(i) + ".w", p.layers[i].w);
    write_tensor(out, prefix + "." + std::to_string(i) + ".b", p.layers[i].b);
  }
}

MLPParams read_mlp(Reader& r, const std::string& prefix,
                   OutputTransform transform) {
  const int nlayers = std::stoi(r.field(prefix + ".layers"));
  MLPParams p;
  p.hidden_activation = Activation::kRelu;
  p.output_transform = transform;
  for (int i = 0; i < nlayers; ++i) {
    DenseLayer l;
    l.w = r.tensor(prefix + "." + std::to_string(i) + ".w");
    l.b = r.tensor(prefix + "." + std::to_string(i) + ".b");
    p.layers.push_back(std::move(l));
  }
  return p;
}

}  // namespace

void save_rnetwork(const std::string& path, const RNetwork& net,
                   long collected_steps) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("checkpoint: cannot write " + path);
  out << kMagic << "\nkind rnet\n";
  out << "comparator " << comparator_name(net.comparator) << '\n';
  out << "shared " << (net.shared ? 1 : 0) << '\n';
  out << "embedding_dim " << net.embedding_dim << '\n';
  out << "trained " << (net.trained ? 1 : 0) << '\n';
  out << "collected_steps " << collected_steps << '\n';
  write_mlp(out, "branch_a", net.branch_a);
  if (!net.shared) write_mlp(out, "branch_b", net.branch_b);
  if (net.comparator == ComparatorKind::kConcatMlp) {
    write_mlp(out, "comparator", net.comparator_mlp);
  }
  out << "end\n";
}

LoadedRnet load_rnetwork(const std::string& path) {
  Reader r(path);
  if (r.line() != kMagic) throw IoError("checkpoint: bad magic in " + path);
  if (r.field("kind") != "rnet") throw IoError("checkpoint: not an rnet checkpoint: " + path);
  LoadedRnet loaded;
  RNetwork& net = loaded.net;
  net.comparator = comparator_from_name(r.field("comparator"));
  net.shared = r.field("shared") == "1";
  net.embedding_dim = std::stoi(r.field("embedding_dim"));
  net.trained = r.field("trained") == "1";
  loaded.collected_steps = std::stol(r.field("collected_steps"));
  net.branch_a = read_mlp(r, "branch_a", OutputTransform::kIdentity);
  if (!net.shared) net.branch_b = read_mlp(r, "branch_b", OutputTransform::kIdentity);
  if (net.comparator == ComparatorKind::kConcatMlp) {
    net.comparator_mlp = read_mlp(r, "comparator", OutputTransform::kIdentity);
  }
  if (r.line() != "end") throw IoError("checkpoint: missing end marker in " + path);
  return loaded;
}

void save_policy(const std::string& path, const PolicyNet& net) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("checkpoint: cannot write " + path);
  out << kMagic << "\nkind policy\n";
  write_tensor(out, "l1.w", net.l1.w);
  write_tensor(out, "l1.b", net.l1.b);
  write_tensor(out, "l2.w", net.l2.w);
  write_tensor(out, "l2.b", net.l2.b);
  write_tensor(out, "policy_head.w", net.policy_head.w);
  write_tensor(out, "policy_head.b", net.policy_head.b);
  write_tensor(out, "value_head.w", net.value_head.w);
  write_tensor(out, "value_head.b", net.value_head.b);
  out << "end\n";
}

PolicyNet load_policy(const std::string& path) {
  Reader r(path);
  if (r.line() != kMagic) throw IoError("checkpoint: bad magic in " + path);
  if (r.field("kind") != "policy") throw IoError("checkpoint: not a policy checkpoint: " + path);
  PolicyNet net;
  net.l1.w = r.tensor("l1.w");
  net.l1.b = r.tensor("l1.b");
  net.l2.w = r.tensor("l2.w");
  net.l2.b = r.tensor("l2.b");
  net.policy_head.w = r.tensor("policy_head.w");
  net.policy_head.b = r.tensor("policy_head.b");
  net.value_head.w = r.tensor("value_head.w");
  net.value_head.b = r.tensor("value_head.b");
  if (r.line() != "end") throw IoError("checkpoint: missing end marker in " + path);
  return net;
}

}  // namespace ecmaze
