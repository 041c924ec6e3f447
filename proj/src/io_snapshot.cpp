#include <algorithm>
#include <cstring>
#include <fstream>

#include "dfax/io.hpp"

namespace dfax::io {

namespace {

constexpr char kMagic[8] = {'D', 'F', 'A', 'X', 'S', 'N', 'A', 'P'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot write " + path);
  }

  void bytes(const void* data, std::size_t size) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  }
  void u32(std::uint32_t v) { bytes(&v, sizeof(v)); }
  void u64(std::uint64_t v) { bytes(&v, sizeof(v)); }
  void i64(std::int64_t v) { bytes(&v, sizeof(v)); }
  void f64(double v) { bytes(&v, sizeof(v)); }
  void flag(bool v) { u32(v ? 1 : 0); }

  void string(const std::string& s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  void vector(const Vector& v) {
    u64(static_cast<std::uint64_t>(v.size()));
    bytes(v.data(), static_cast<std::size_t>(v.size()) * sizeof(double));
  }
  void matrix(const Matrix& m) {
    u64(static_cast<std::uint64_t>(m.rows()));
    u64(static_cast<std::uint64_t>(m.cols()));
    bytes(m.data(), static_cast<std::size_t>(m.size()) * sizeof(double));
  }
  void byte_list(const std::vector<std::uint8_t>& v) {
    u64(v.size());
    bytes(v.data(), v.size());
  }
  void int_list(const std::vector<int>& v) {
    u64(v.size());
    for (int x : v) i64(x);
  }
  void index_list(const std::vector<Index>& v) {
    u64(v.size());
    for (Index x : v) i64(x);
  }

  void finish(const std::string& path) {
    out_.flush();
    if (!out_) throw IoError("failed writing " + path);
  }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open " + path);
    in_.seekg(0, std::ios::end);
    remaining_ = static_cast<std::uint64_t>(in_.tellg());
    in_.seekg(0, std::ios::beg);
  }

  void bytes(void* data, std::size_t size) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
    if (static_cast<std::size_t>(in_.gcount()) != size)
      throw DeserializeError("snapshot truncated");
    remaining_ -= size;
  }
  std::uint32_t u32() { std::uint32_t v; bytes(&v, sizeof(v)); return v; }
  std::uint64_t u64() { std::uint64_t v; bytes(&v, sizeof(v)); return v; }
  std::int64_t i64() { std::int64_t v; bytes(&v, sizeof(v)); return v; }
  double f64() { double v; bytes(&v, sizeof(v)); return v; }
  bool flag() { return u32() != 0; }

  // Element count validated against the bytes actually left in the file, so
  // corrupt length fields fail cleanly instead of allocating.
  std::uint64_t length(std::uint64_t element_size = 1) {
    const std::uint64_t n = u64();
    if (element_size == 0 || n > remaining_ / element_size)
      throw DeserializeError("snapshot truncated");
    return n;
  }
  std::string string() {
    std::string s(length(), '\0');
    bytes(s.data(), s.size());
    return s;
  }
  Vector vector() {
    Vector v(static_cast<Index>(length(sizeof(double))));
    bytes(v.data(), static_cast<std::size_t>(v.size()) * sizeof(double));
    return v;
  }
  Matrix matrix() {
    const Index rows = static_cast<Index>(length(sizeof(double)));
    const Index cols = static_cast<Index>(length(sizeof(double)));
    if (rows != 0 && static_cast<std::uint64_t>(cols) >
                         remaining_ / sizeof(double) / static_cast<std::uint64_t>(rows))
      throw DeserializeError("snapshot truncated");
    Matrix m(rows, cols);
    bytes(m.data(), static_cast<std::size_t>(m.size()) * sizeof(double));
    return m;
  }
  std::vector<std::uint8_t> byte_list() {
    std::vector<std::uint8_t> v(length());
    bytes(v.data(), v.size());
    return v;
  }
  std::vector<int> int_list() {
    std::vector<int> v(length(sizeof(std::int64_t)));
    for (auto& x : v) x = static_cast<int>(i64());
    return v;
  }
  std::vector<Index> index_list() {
    std::vector<Index> v(length(sizeof(std::int64_t)));
    for (auto& x : v) x = static_cast<Index>(i64());
    return v;
  }

 private:
  std::ifstream in_;
  std::uint64_t remaining_ = 0;
};

void write_feature_map(Writer& w, const kde::FeatureMap1D& map) {
  w.i64(map.dimension);
  w.u64(map.seed);
  w.f64(map.params.gamma);
  w.f64(map.freq_step);
  w.f64(map.shift);
  w.vector(map.frequencies);
  w.vector(map.weight_sqrt);
}

kde::FeatureMap1D read_feature_map(Reader& r) {
  kde::FeatureMap1D map;
  map.dimension = static_cast<Index>(r.i64());
  map.seed = r.u64();
  map.params.gamma = r.f64();
  map.freq_step = r.f64();
  map.shift = r.f64();
  map.frequencies = r.vector();
  map.weight_sqrt = r.vector();
  return map;
}

void write_mean_map(Writer& w, const kde::KernelMeanMap1D& mm) {
  w.vector(mm.mean_vector);
  w.i64(mm.count);
}

kde::KernelMeanMap1D read_mean_map(Reader& r) {
  kde::KernelMeanMap1D mm;
  mm.mean_vector = r.vector();
  mm.count = static_cast<Index>(r.i64());
  return mm;
}

void write_sinne(Writer& w, const sinne::SinneModel1D& model) {
  w.matrix(model.centers);
  w.matrix(model.radii);
  w.i64(model.zero_radius_balls);
}

sinne::SinneModel1D read_sinne(Reader& r) {
  sinne::SinneModel1D model;
  model.centers = r.matrix();
  model.radii = r.matrix();
  model.zero_radius_balls = r.i64();
  return model;
}

}  // namespace

void save_explainer(const std::string& path, const ExplainerSnapshot& snapshot) {
  const DfaxExplainer& expl = snapshot.explainer;
  Writer w(path);
  w.bytes(kMagic, sizeof(kMagic));
  w.u32(kVersion);

  w.u32(static_cast<std::uint32_t>(expl.backend));
  w.u32(static_cast<std::uint32_t>(expl.num_classes));
  w.i64(expl.dim);
  w.u64(static_cast<std::uint64_t>(expl.feature_names.size()));
  for (const auto& name : expl.feature_names) w.string(name);
  w.byte_list(expl.constant_feature);
  w.index_list(expl.class_counts);

  w.u32(static_cast<std::uint32_t>(expl.params.backend));
  w.f64(expl.params.kernel.gamma);
  w.i64(expl.params.map_dimension);
  w.u32(static_cast<std::uint32_t>(expl.params.sinne.psi));
  w.u32(static_cast<std::uint32_t>(expl.params.sinne.ensemble_size));
  w.u64(expl.params.sinne.seed);
  w.u64(expl.params.seed);

  switch (expl.backend) {
    case Backend::ExactGaussian: {
      w.u64(expl.class_support.size());
      for (const auto& support : expl.class_support) w.vector(support);
      break;
    }
    case Backend::FeatureMapGaussian: {
      w.u64(expl.feature_maps.size());
      for (const auto& map : expl.feature_maps) write_feature_map(w, map);
      w.u64(expl.class_mean.size());
      for (const auto& mm : expl.class_mean) write_mean_map(w, mm);
      w.u64(expl.complement_mean.size());
      for (const auto& mm : expl.complement_mean) write_mean_map(w, mm);
      break;
    }
    case Backend::Sinne: {
      w.u64(expl.class_sinne.size());
      for (const auto& model : expl.class_sinne) write_sinne(w, model);
      w.u64(expl.complement_sinne.size());
      for (const auto& model : expl.complement_sinne) write_sinne(w, model);
      w.byte_list(expl.class_usable);
      break;
    }
  }

  w.int_list(expl.empty_classes);
  w.int_list(expl.undersized_classes);
  w.i64(expl.zero_radius_balls);

  w.vector(snapshot.standardization.means);
  w.vector(snapshot.standardization.stds);
  w.byte_list(snapshot.standardization.constant_column);
  w.u64(static_cast<std::uint64_t>(snapshot.label_names.size()));
  for (const auto& name : snapshot.label_names) w.string(name);
  w.u64(snapshot.dataset_hash);
  w.finish(path);
}

ExplainerSnapshot load_explainer(const std::string& path) {
  Reader r(path);
  char magic[8];
  r.bytes(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw DeserializeError(path + " is not an explainer snapshot");
  const std::uint32_t version = r.u32();
  if (version != kVersion)
    throw VersionMismatch("snapshot version " + std::to_string(version) + ", expected " +
                          std::to_string(kVersion));

  ExplainerSnapshot snapshot;
  DfaxExplainer& expl = snapshot.explainer;
  expl.backend = static_cast<Backend>(r.u32());
  expl.num_classes = static_cast<int>(r.u32());
  expl.dim = static_cast<Index>(r.i64());
  expl.feature_names.resize(r.length(8));
  for (auto& name : expl.feature_names) name = r.string();
  expl.constant_feature = r.byte_list();
  expl.class_counts = r.index_list();

  expl.params.backend = static_cast<Backend>(r.u32());
  expl.params.kernel.gamma = r.f64();
  expl.params.map_dimension = static_cast<Index>(r.i64());
  expl.params.sinne.psi = static_cast<int>(r.u32());
  expl.params.sinne.ensemble_size = static_cast<int>(r.u32());
  expl.params.sinne.seed = r.u64();
  expl.params.seed = r.u64();

  switch (expl.backend) {
    case Backend::ExactGaussian: {
      expl.class_support.resize(r.length(8));
      for (auto& support : expl.class_support) support = r.vector();
      break;
    }
    case Backend::FeatureMapGaussian: {
      expl.feature_maps.resize(r.length(8));
      for (auto& map : expl.feature_maps) map = read_feature_map(r);
      expl.class_mean.resize(r.length(8));
      for (auto& mm : expl.class_mean) mm = read_mean_map(r);
      expl.complement_mean.resize(r.length(8));
      for (auto& mm : expl.complement_mean) mm = read_mean_map(r);
      break;
    }
    case Backend::Sinne: {
      expl.class_sinne.resize(r.length(8));
      for (auto& model : expl.class_sinne) model = read_sinne(r);
      expl.complement_sinne.resize(r.length(8));
      for (auto& model : expl.complement_sinne) model = read_sinne(r);
      expl.class_usable = r.byte_list();
      break;
    }
    default:
      throw DeserializeError("snapshot carries an unknown backend");
  }

  expl.empty_classes = r.int_list();
  expl.undersized_classes = r.int_list();
  expl.zero_radius_balls = r.i64();

  snapshot.standardization.means = r.vector();
  snapshot.standardization.stds = r.vector();
  snapshot.standardization.constant_column = r.byte_list();
  snapshot.label_names.resize(r.length(8));
  for (auto& name : snapshot.label_names) name = r.string();
  snapshot.dataset_hash = r.u64();

  // Structural consistency before anyone computes with the snapshot.
  const std::size_t cells = static_cast<std::size_t>(expl.dim) *
                            static_cast<std::size_t>(std::max(expl.num_classes, 0));
  const bool grid_ok =
      (expl.backend == Backend::ExactGaussian && expl.class_support.size() == cells) ||
      (expl.backend == Backend::FeatureMapGaussian && expl.class_mean.size() == cells &&
       expl.complement_mean.size() == cells &&
       expl.feature_maps.size() == static_cast<std::size_t>(expl.dim)) ||
      (expl.backend == Backend::Sinne && expl.class_sinne.size() == cells &&
       expl.complement_sinne.size() == cells);
  if (!grid_ok || expl.num_classes < 1 || expl.dim < 1 ||
      expl.feature_names.size() != static_cast<std::size_t>(expl.dim) ||
      expl.constant_feature.size() != static_cast<std::size_t>(expl.dim) ||
      expl.class_counts.size() != static_cast<std::size_t>(expl.num_classes))
    throw DeserializeError("snapshot is structurally inconsistent");
  return snapshot;
}

}  // namespace dfax::io
