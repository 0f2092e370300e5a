#include "sparsewarn/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sparsewarn/errors.hpp"

namespace sparsewarn {

namespace {

constexpr std::pair<Method, const char*> kMethodNames[] = {
    {Method::kSrcOmp, "src-omp"},       {Method::kSrcHomotopy, "src-homotopy"},
    {Method::kSrcFista, "src-fista"},   {Method::kSrcAdmm, "src-admm"},
    {Method::kCrc, "crc"},              {Method::kCrcLight, "crc-light"},
    {Method::kCsen1, "csen1"},          {Method::kCsen2, "csen2"},
    {Method::kReconNet, "reconnet"},    {Method::kMlp, "mlp"},
    {Method::kKnn, "knn"},              {Method::kSvm, "svm"},
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

long long to_int(const std::string& key, const std::string& value) {
  long long v = 0;
  const std::string t = trim(value);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    throw ConfigError("config key '" + key + "': expected integer, got '" + value + "'");
  return v;
}

double to_real(const std::string& key, const std::string& value) {
  double v = 0.0;
  const std::string t = trim(value);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    throw ConfigError("config key '" + key + "': expected real, got '" + value + "'");
  return v;
}

/// Method-specific prefixes a method is allowed to configure.
std::set<std::string> allowed_prefixes(Method m) {
  switch (m) {
    case Method::kSrcOmp:
    case Method::kSrcHomotopy:
    case Method::kSrcFista:
    case Method::kSrcAdmm:
      return {"src"};
    case Method::kCrc:
      return {"crc"};
    case Method::kCrcLight:
      return {"crc", "csen"};  // shares the estimator dictionary and lambda
    case Method::kCsen1:
    case Method::kCsen2:
      return {"csen"};
    case Method::kReconNet:
      return {"csen", "reconnet"};
    case Method::kMlp:
      return {"mlp"};
    case Method::kKnn:
      return {"knn", "grid"};
    case Method::kSvm:
      return {"svm", "grid"};
  }
  return {};
}

}  // namespace

const char* method_name(Method m) {
  for (const auto& [method, name] : kMethodNames)
    if (method == m) return name;
  return "?";
}

Method method_from_name(const std::string& name) {
  for (const auto& [method, mname] : kMethodNames)
    if (name == mname) return method;
  throw ConfigError("unknown method '" + name + "'");
}

RunConfig parse_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config_text(buffer.str(), path);
}

RunConfig parse_run_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::map<std::string, std::string> kv;
  {
    std::stringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": expected 'key = value', got '" + line + "'");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
      if (kv.count(key))
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
      kv[key] = value;
    }
  }

  auto take = [&](const char* key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end()) return "";
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  if (auto v = take("dataset"); !v.empty()) cfg.dataset_path = v;
  if (auto v = take("format"); !v.empty()) {
    if (v == "csv") cfg.format = FileFormat::kCsv;
    else if (v == "binary") cfg.format = FileFormat::kBinary;
    else throw ConfigError("config key 'format': expected csv or binary, got '" + v + "'");
  }
  {
    const std::string single = take("method");
    const std::string many = take("methods");
    if (!single.empty() && !many.empty())
      throw ConfigError("config: give either 'method' or 'methods', not both");
    for (const std::string& name : split_list(!single.empty() ? single : many))
      cfg.methods.push_back(method_from_name(name));
  }
  if (auto v = take("pca_m"); !v.empty()) cfg.pca_m = static_cast<int>(to_int("pca_m", v));
  if (auto v = take("folds"); !v.empty()) cfg.folds = static_cast<int>(to_int("folds", v));
  if (auto v = take("seed"); !v.empty()) cfg.seed = static_cast<std::uint64_t>(to_int("seed", v));
  if (auto v = take("out_dir"); !v.empty()) cfg.out_dir = v;
  if (auto v = take("threads"); !v.empty()) cfg.threads = static_cast<int>(to_int("threads", v));
  if (auto v = take("positive_class"); !v.empty())
    cfg.positive_class = static_cast<int>(to_int("positive_class", v));
  if (auto v = take("save_model"); !v.empty()) {
    if (v == "none") cfg.save_model = SaveModelMode::kNone;
    else if (v == "first_fold") cfg.save_model = SaveModelMode::kFirstFold;
    else if (v == "all") cfg.save_model = SaveModelMode::kAll;
    else throw ConfigError("config key 'save_model': expected none|first_fold|all");
  }
  if (auto v = take("balance.target"); !v.empty())
    cfg.balance_target = v == "auto" ? 0 : to_int("balance.target", v);
  if (auto v = take("balance.jitter_sigma"); !v.empty())
    cfg.balance_jitter = v == "auto" ? -1.0 : to_real("balance.jitter_sigma", v);

  if (auto v = take("src.lambda"); !v.empty()) cfg.src_lambda = to_real("src.lambda", v);
  if (auto v = take("src.tol"); !v.empty()) cfg.src_tol = to_real("src.tol", v);
  if (auto v = take("src.max_iter"); !v.empty())
    cfg.src_max_iter = static_cast<int>(to_int("src.max_iter", v));
  if (auto v = take("src.rho"); !v.empty()) cfg.src_rho = to_real("src.rho", v);
  if (auto v = take("src.omp_k"); !v.empty())
    cfg.src_omp_k = v == "auto" ? 0 : static_cast<int>(to_int("src.omp_k", v));

  if (auto v = take("crc.lambda"); !v.empty())
    cfg.crc_lambda = v == "auto" ? -1.0 : to_real("crc.lambda", v);
  if (auto v = take("crc.dict_per_class"); !v.empty())
    cfg.crc_dict_per_class =
        v == "all" ? kAllAtoms : static_cast<int>(to_int("crc.dict_per_class", v));

  if (auto v = take("csen.dict_per_class"); !v.empty())
    cfg.csen_dict_per_class = static_cast<int>(to_int("csen.dict_per_class", v));
  if (auto v = take("csen.lambda"); !v.empty())
    cfg.csen_lambda = v == "auto" ? -1.0 : to_real("csen.lambda", v);
  if (auto v = take("csen.proxy"); !v.empty()) {
    if (v == "ridge") cfg.csen_proxy = ProxyKind::kRidge;
    else if (v == "transpose") cfg.csen_proxy = ProxyKind::kTranspose;
    else throw ConfigError("config key 'csen.proxy': expected ridge or transpose");
  }
  if (auto v = take("csen.tau"); !v.empty()) cfg.csen_tau = to_real("csen.tau", v);
  if (auto v = take("csen.epochs"); !v.empty())
    cfg.csen_train.epochs = static_cast<int>(to_int("csen.epochs", v));
  if (auto v = take("csen.lr"); !v.empty()) cfg.csen_train.lr = to_real("csen.lr", v);
  if (auto v = take("csen.batch"); !v.empty())
    cfg.csen_train.batch_size = static_cast<int>(to_int("csen.batch", v));

  if (auto v = take("reconnet.epochs"); !v.empty())
    cfg.reconnet_train.epochs = static_cast<int>(to_int("reconnet.epochs", v));
  if (auto v = take("reconnet.lr"); !v.empty()) cfg.reconnet_train.lr = to_real("reconnet.lr", v);
  if (auto v = take("reconnet.batch"); !v.empty())
    cfg.reconnet_train.batch_size = static_cast<int>(to_int("reconnet.batch", v));

  if (auto v = take("mlp.epochs"); !v.empty())
    cfg.mlp_train.epochs = static_cast<int>(to_int("mlp.epochs", v));
  if (auto v = take("mlp.lr"); !v.empty()) cfg.mlp_train.lr = to_real("mlp.lr", v);
  if (auto v = take("mlp.batch"); !v.empty())
    cfg.mlp_train.batch_size = static_cast<int>(to_int("mlp.batch", v));
  if (auto v = take("mlp.hidden"); !v.empty()) {
    cfg.mlp_hidden.clear();
    for (const std::string& item : split_list(v))
      cfg.mlp_hidden.push_back(static_cast<int>(to_int("mlp.hidden", item)));
    if (cfg.mlp_hidden.size() == 2) cfg.mlp_hidden.insert(cfg.mlp_hidden.begin(), 0);
    if (cfg.mlp_hidden.size() != 3)
      throw ConfigError("config key 'mlp.hidden': expected 2 or 3 widths");
  }

  if (auto v = take("grid.inner_k"); !v.empty())
    cfg.grid_inner_k = static_cast<int>(to_int("grid.inner_k", v));
  if (auto v = take("knn.k"); !v.empty())
    cfg.knn_fixed_k = static_cast<int>(to_int("knn.k", v));
  if (auto v = take("knn.metric"); !v.empty()) cfg.knn_fixed_metric = v;
  if (auto v = take("knn.k_points"); !v.empty())
    cfg.knn_k_points = static_cast<int>(to_int("knn.k_points", v));
  if (auto v = take("svm.kernels"); !v.empty()) cfg.svm_kernels = split_list(v);
  if (auto v = take("svm.poly_orders"); !v.empty()) {
    cfg.svm_poly_orders.clear();
    for (const std::string& item : split_list(v))
      cfg.svm_poly_orders.push_back(static_cast<int>(to_int("svm.poly_orders", item)));
  }
  if (auto v = take("svm.grid_points"); !v.empty())
    cfg.svm_grid_points = static_cast<int>(to_int("svm.grid_points", v));
  if (auto v = take("svm.c"); !v.empty()) cfg.svm_fixed_c = to_real("svm.c", v);
  if (auto v = take("svm.gamma"); !v.empty()) cfg.svm_fixed_gamma = to_real("svm.gamma", v);
  if (auto v = take("svm.kernel"); !v.empty()) cfg.svm_fixed_kernel = v;

  if (!kv.empty()) throw ConfigError(origin + ": unknown config key '" + kv.begin()->first + "'");

  // Validate method-specific prefixes against the named methods.
  if (cfg.methods.empty()) throw ConfigError(origin + ": no method named");
  std::set<std::string> allowed;
  for (Method m : cfg.methods) {
    const auto p = allowed_prefixes(m);
    allowed.insert(p.begin(), p.end());
  }
  // Re-scan the original text for dotted method prefixes actually used.
  {
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(line.substr(0, eq));
      const auto dot = key.find('.');
      if (dot == std::string::npos) continue;
      const std::string prefix = key.substr(0, dot);
      if (prefix == "balance" || prefix == "grid") continue;
      if (!allowed.count(prefix))
        throw ConfigError(origin + ": key '" + key + "' does not apply to method(s) " +
                          [&] {
                            std::string names;
                            for (Method m : cfg.methods)
                              names += std::string(names.empty() ? "" : ",") + method_name(m);
                            return names;
                          }());
    }
  }

  if (cfg.folds < 2) throw ConfigError("config: folds must be at least 2");
  if (cfg.pca_m < 1) throw ConfigError("config: pca_m must be positive");
  if (cfg.threads < 1) throw ConfigError("config: threads must be at least 1");
  if (cfg.csen_tau <= 0.0 || cfg.csen_tau >= 1.0)
    throw ConfigError("config: csen.tau must lie strictly inside (0, 1)");
  return cfg;
}

std::string RunConfig::echo() const {
  std::ostringstream os;
  os << "dataset = " << dataset_path << "\n";
  os << "format = " << (format == FileFormat::kCsv ? "csv" : "binary") << "\n";
  os << "methods = ";
  for (std::size_t i = 0; i < methods.size(); ++i)
    os << (i ? "," : "") << method_name(methods[i]);
  os << "\n";
  os << "pca_m = " << pca_m << "\n";
  os << "folds = " << folds << "\n";
  os << "seed = " << seed << "\n";
  os << "out_dir = " << out_dir << "\n";
  os << "threads = " << threads << "\n";
  os << "positive_class = " << positive_class << "\n";
  os << "save_model = "
     << (save_model == SaveModelMode::kNone
             ? "none"
             : save_model == SaveModelMode::kFirstFold ? "first_fold" : "all")
     << "\n";
  os << "balance.target = " << (balance_target == 0 ? "auto" : std::to_string(balance_target))
     << "\n";
  os << "balance.jitter_sigma = "
     << (balance_jitter < 0 ? "auto" : std::to_string(balance_jitter)) << "\n";
  os << "src.lambda = " << src_lambda << "\n";
  os << "src.tol = " << src_tol << "\n";
  os << "src.max_iter = " << src_max_iter << "\n";
  os << "src.rho = " << src_rho << "\n";
  os << "src.omp_k = " << (src_omp_k == 0 ? "auto" : std::to_string(src_omp_k)) << "\n";
  os << "crc.lambda = " << (crc_lambda < 0 ? "auto" : std::to_string(crc_lambda)) << "\n";
  os << "crc.dict_per_class = "
     << (crc_dict_per_class == kAllAtoms ? "all" : std::to_string(crc_dict_per_class)) << "\n";
  os << "csen.dict_per_class = " << csen_dict_per_class << "\n";
  os << "csen.lambda = " << (csen_lambda < 0 ? "auto" : std::to_string(csen_lambda)) << "\n";
  os << "csen.proxy = " << (csen_proxy == ProxyKind::kRidge ? "ridge" : "transpose") << "\n";
  os << "csen.tau = " << csen_tau << "\n";
  os << "csen.epochs = " << csen_train.epochs << ", csen.lr = " << csen_train.lr
     << ", csen.batch = " << csen_train.batch_size << "\n";
  os << "reconnet.epochs = " << reconnet_train.epochs << ", reconnet.lr = " << reconnet_train.lr
     << ", reconnet.batch = " << reconnet_train.batch_size << "\n";
  os << "mlp.epochs = " << mlp_train.epochs << ", mlp.lr = " << mlp_train.lr
     << ", mlp.batch = " << mlp_train.batch_size << "\n";
  os << "mlp.hidden = ";
  for (std::size_t i = 0; i < mlp_hidden.size(); ++i) os << (i ? "," : "") << mlp_hidden[i];
  os << "\n";
  os << "grid.inner_k = " << grid_inner_k << "\n";
  os << "knn.k = " << (knn_fixed_k == 0 ? "auto" : std::to_string(knn_fixed_k)) << "\n";
  os << "knn.metric = " << (knn_fixed_metric.empty() ? "auto" : knn_fixed_metric) << "\n";
  os << "knn.k_points = " << knn_k_points << "\n";
  os << "svm.kernels = ";
  for (std::size_t i = 0; i < svm_kernels.size(); ++i) os << (i ? "," : "") << svm_kernels[i];
  os << "\n";
  os << "svm.grid_points = " << svm_grid_points << "\n";
  return os.str();
}

}  // namespace sparsewarn
