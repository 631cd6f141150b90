#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "twirl/io.hpp"

namespace twirl::cli {
namespace {

using io::Json;

struct Config {
  double tol = 1e-8;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;
};

struct Result {
  Json body;
  int code = kOk;
};

GroupPtr resolve_group(const std::string& arg) {
  if (std::filesystem::exists(arg)) return io::load_group(arg);
  const auto colon = arg.find(':');
  const std::string name = arg.substr(0, colon);
  int n = 0;
  if (colon != std::string::npos) {
    try {
      n = std::stoi(arg.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_parameter, "bad group size in '" + arg + "'");
    }
  }
  if (name == "cyclic") return build_cyclic(n);
  if (name == "dihedral") return build_dihedral(n);
  if (name == "symmetric") return build_symmetric(n);
  if (name == "quaternion") return build_quaternion();
  throw Error(ErrorCode::invalid_parameter,
              "'" + arg + "' is neither a file nor one of cyclic:N, dihedral:N, symmetric:N, quaternion");
}

Representation load_rep(const std::string& path, const Config& cfg) {
  Representation pi = io::load_representation(path).with_tolerance(cfg.tol);
  require_valid(pi);
  return pi;
}

Json group_body(const FiniteGroup& g) {
  Json j = io::to_json(g);
  const auto& cls = g.conjugacy_classes();
  j["classes"] = cls.classes;
  j["class_count"] = cls.count();
  j["abelian"] = g.is_abelian();
  return j;
}

Matrix load_matrix(const std::string& path) {
  const Json j = io::read_file(path);
  return io::matrix_from_json(j.is_object() && j.contains("matrix") ? j.at("matrix") : j);
}

int sum_n_squared(const IsotypicDecomposition& dec) {
  int s = 0;
  for (int n : dec.dimensions()) s += n * n;
  return s;
}

Json verify_block(const Representation& pi, const InvariantReport& report, bool& ok) {
  const auto phi = twirling_channel(pi).channel();
  const double limit = kWitnessTolerance * pi.dim();
  Json j;
  j["alpha_outputs"] = output_overlap(phi, report.alpha_cert.vectors);
  const Matrix& c = report.code_cert.vectors;
  const auto code = verify_code(phi, c * c.adjoint(), limit);
  j["code_kl"] = code.residuals.at("kl");
  j["code_outputs"] = code.residuals.at("outputs");
  const auto comm = commutant_basis(pi);
  double gamma_channel = 0.0;
  double gamma_comm = 0.0;
  const Matrix& g = report.gamma_cert.vectors;
  for (Eigen::Index a = 0; a < g.cols(); ++a)
    for (Eigen::Index b = 0; b < g.cols(); ++b) {
      if (a == b) continue;
      const auto p = orthogonality_pair(pi, comm, g.col(a), g.col(b));
      gamma_channel = std::max(gamma_channel, p.channel_norm);
      gamma_comm = std::max(gamma_comm, p.commutant_max);
    }
  j["gamma_channel"] = gamma_channel;
  j["gamma_commutant"] = gamma_comm;
  const Matrix& m = report.tau_cert.vectors;
  double tau = 0.0;
  for (Eigen::Index a = 0; a < m.cols(); ++a)
    for (Eigen::Index b = 0; b < m.cols(); ++b) {
      const double h = 1.0 / std::sqrt(2.0);
      if (a < b) {
        // (x ± y)/√2 pairs span the rest of the trace-zero part
        const Vector u = h * (m.col(a) + m.col(b));
        const Vector v = h * (m.col(a) - m.col(b));
        tau = std::max(tau, group_average(pi, u * v.adjoint()).norm());
      }
      if (a != b) tau = std::max(tau, group_average(pi, m.col(a) * m.col(b).adjoint()).norm());
    }
  j["tau_pairs"] = tau;
  ok = code.pass;
  for (const auto& [key, value] : j.items()) {
    if (value.is_number() && !(value.get<double>() <= limit)) ok = false;
  }
  j["tolerance"] = limit;
  j["pass"] = ok;
  return j;
}

void render_text(const Json& j, const std::string& prefix, std::ostream& os) {
  for (const auto& [key, value] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      render_text(value, name, os);
    } else if (value.is_array()) {
      bool scalars = value.size() <= 16;
      for (const auto& e : value) scalars = scalars && e.is_primitive();
      if (scalars) os << name << ": " << value.dump() << "\n";
    } else if (value.is_number_float()) {
      os << name << ": " << value.get<double>() << "\n";
    } else {
      os << name << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
    }
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decompose finite-group representations and certify twirling-channel invariants", "twirl_lab"};
  app.fallthrough();
  app.require_subcommand(1);
  Config cfg;
  app.add_option("--tol", cfg.tol, "Validation tolerance")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  app.add_option("--out", cfg.out, "Write output to this path");

  std::function<Result()> action;
  std::vector<std::string> pos;
  int num = 0;

  // group
  auto* group = app.add_subcommand("group", "Build, combine or load a finite group");
  group->require_subcommand(1);
  for (const char* kind : {"cyclic", "dihedral", "symmetric"}) {
    auto* sub = group->add_subcommand(kind, std::string("Build the ") + kind + " group");
    sub->add_option("n", num, "Size parameter")->required();
    const std::string k = kind;
    sub->callback([&, k] {
      action = [&, k] { return Result{group_body(*resolve_group(k + ":" + std::to_string(num)))}; };
    });
  }
  group->add_subcommand("quaternion", "Quaternion group Q8")->callback([&] {
    action = [&] { return Result{group_body(*build_quaternion())}; };
  });
  auto* product = group->add_subcommand("product", "Direct product of two groups");
  product->add_option("groups", pos, "Two group files or builtin names")->required()->expected(2);
  product->callback([&] {
    action = [&] { return Result{group_body(*build_direct_product(*resolve_group(pos[0]), *resolve_group(pos[1])))}; };
  });
  auto* load = group->add_subcommand("load", "Load and validate a group file");
  load->add_option("path", pos, "Group JSON")->required()->expected(1);
  load->callback([&] { action = [&] { return Result{group_body(*io::load_group(pos[0]))}; }; });

  // rep
  auto* rep = app.add_subcommand("rep", "Build or validate representations");
  rep->require_subcommand(1);
  auto* regular = rep->add_subcommand("regular", "Left-regular representation");
  regular->add_option("group", pos, "Group file or builtin name")->required()->expected(1);
  regular->callback([&] {
    action = [&] { return Result{io::to_json(regular_representation(resolve_group(pos[0])))}; };
  });
  auto* sum = rep->add_subcommand("sum", "Direct sum of representations of one group");
  sum->add_option("reps", pos, "Representation files")->required()->expected(1, 64);
  sum->callback([&] {
    action = [&] {
      std::vector<std::pair<Representation, int>> parts;
      for (const auto& p : pos) {
        Representation r = load_rep(p, cfg);
        if (!parts.empty()) {
          if (r.group().table() != parts.front().first.group().table()) {
            throw Error(ErrorCode::invalid_parameter, "summands act on different groups");
          }
          r = Representation(parts.front().first.group_ptr(), r.matrices(), r.tolerance());
        }
        parts.emplace_back(std::move(r), 1);
      }
      return Result{io::to_json(direct_sum(parts))};
    };
  });
  auto* tensor = rep->add_subcommand("tensor", "Outer tensor product on the product group");
  tensor->add_option("reps", pos, "Two representation files")->required()->expected(2);
  tensor->callback([&] {
    action = [&] { return Result{io::to_json(outer_tensor(load_rep(pos[0], cfg), load_rep(pos[1], cfg)))}; };
  });
  auto* validate_cmd = rep->add_subcommand("validate", "Homomorphism and unitarity certificate");
  validate_cmd->add_option("rep", pos, "Representation file")->required()->expected(1);
  validate_cmd->callback([&] {
    action = [&] {
      const Representation pi = io::load_representation(pos[0]).with_tolerance(cfg.tol);
      const auto c = validate(pi);
      Json j{{"dim", pi.dim()},
             {"order", pi.group().order()},
             {"homomorphism_defect", c.homomorphism_defect},
             {"unitarity_defect", c.unitarity_defect},
             {"identity_defect", c.identity_defect},
             {"pass", c.pass}};
      if (c.failing_g >= 0) j["failing"] = Json::array({c.failing_g, c.failing_h});
      return Result{j, c.pass ? kOk : kInputError};
    };
  });

  // decompose
  auto* decompose = app.add_subcommand("decompose", "Isotypic decomposition with cross-checks");
  decompose->add_option("rep", pos, "Representation file")->required()->expected(1);
  decompose->callback([&] {
    action = [&] {
      const Representation pi = load_rep(pos[0], cfg);
      const auto dec = isotypic_decomposition(pi, cfg.seed);
      const auto res = verify_decomposition(pi, dec);
      const auto mult = multiplicity_crosscheck(pi, dec);
      Json j = io::to_json(dec);
      j["residuals"] = io::to_json(res);
      j["multiplicity_check"] = Json{{"character_multiplicities", mult.character_multiplicities},
                                     {"max_residual", mult.max_residual},
                                     {"pass", mult.pass}};
      return Result{j, res.pass && mult.pass ? kOk : kCertificateFailure};
    };
  });

  // invariants
  auto* invariants = app.add_subcommand("invariants", "Closed forms and verified witnesses");
  invariants->add_option("rep", pos, "Representation file")->required()->expected(1);
  bool verify = false;
  bool tensor_check = false;
  std::string log_base = "2";
  invariants->add_flag("--verify", verify, "Re-verify every witness from its emitted vectors");
  invariants->add_flag("--tensor-check", tensor_check, "Check alpha on the second tensor power");
  invariants->add_option("--log-base", log_base, "Capacity logarithm base: 2 or e")
      ->check(CLI::IsMember({"2", "e"}))
      ->capture_default_str();
  invariants->callback([&] {
    action = [&] {
      const Representation pi = load_rep(pos[0], cfg);
      const auto report = full_report(pi, cfg.seed);
      Json j = io::to_json(report);
      j["pr_lower_bound"] = pr_lower_bound(report.decomposition);
      if (log_base == "e") j["capacity_nats"] = zero_error_capacity(report.decomposition, std::exp(1.0));
      int code = kOk;
      if (verify) {
        bool ok = false;
        j["verification"] = verify_block(pi, report, ok);
        if (!ok) code = kCertificateFailure;
      }
      if (tensor_check) {
        const auto t = capacity_tensor_check(pi, 2, cfg.seed);
        j["tensor_check"] = io::to_json(t);
        if (!t.pass) code = kCertificateFailure;
      }
      return Result{j, code};
    };
  });

  // channel
  auto* channel = app.add_subcommand("channel", "Channel construction and checks");
  channel->require_subcommand(1);
  auto* twirl = channel->add_subcommand("twirl", "Twirling channel of a representation");
  twirl->add_option("rep", pos, "Representation file")->required()->expected(1);
  twirl->callback([&] {
    action = [&] {
      const Representation pi = load_rep(pos[0], cfg);
      const auto t = twirling_channel(pi);
      const auto rank = choi_rank_report(t.channel());
      Json j = io::to_json(t.channel());
      j["choi_rank"] = rank.rank;
      j["gap_orders"] = rank.gap_orders;
      j["sum_n_squared"] = sum_n_squared(isotypic_decomposition(pi, cfg.seed));
      return Result{j};
    };
  });
  auto* choi = channel->add_subcommand("choi", "Choi matrix and rank");
  choi->add_option("channel", pos, "Channel file")->required()->expected(1);
  choi->callback([&] {
    action = [&] {
      const auto phi = io::channel_from_json(io::read_file(pos[0]), cfg.tol);
      const auto rank = choi_rank_report(phi);
      return Result{Json{{"choi", io::to_json(choi_matrix(phi))},
                         {"rank", rank.rank},
                         {"spectrum", rank.spectrum},
                         {"gap_orders", rank.gap_orders}}};
    };
  });
  auto* kraus = channel->add_subcommand("kraus", "Minimal Kraus set");
  kraus->add_option("channel", pos, "Channel file")->required()->expected(1);
  kraus->callback([&] {
    action = [&] {
      const auto phi = io::channel_from_json(io::read_file(pos[0]), cfg.tol);
      auto minimal = QuantumChannel::from_kraus(kraus_from_choi(phi), std::max(cfg.tol, phi.tolerance()));
      Json j = io::to_json(minimal);
      j["rank"] = static_cast<int>(minimal.kraus()->size());
      return Result{j};
    };
  });
  auto* covariance = channel->add_subcommand("covariance", "(pi, sigma)-covariance certificate");
  covariance->add_option("files", pos, "Channel, input representation, output representation")
      ->required()
      ->expected(3);
  covariance->callback([&] {
    action = [&] {
      const auto phi = io::channel_from_json(io::read_file(pos[0]), cfg.tol);
      const auto c = is_covariant(phi, load_rep(pos[1], cfg), load_rep(pos[2], cfg), cfg.tol);
      return Result{Json{{"max_defect", c.max_defect}, {"worst_element", c.worst_element}, {"pass", c.pass}},
                    c.pass ? kOk : kCertificateFailure};
    };
  });
  auto* apply = channel->add_subcommand("apply", "Apply a channel to an operator");
  apply->add_option("files", pos, "Channel file and operator file")->required()->expected(2);
  apply->callback([&] {
    action = [&] {
      const auto phi = io::channel_from_json(io::read_file(pos[0]), cfg.tol);
      const Matrix rho = load_matrix(pos[1]);
      const Matrix outm = phi.apply(rho);
      return Result{Json{{"output", io::to_json(outm)},
                         {"trace_in", io::to_json(rho.trace())},
                         {"trace_out", io::to_json(outm.trace())}}};
    };
  });
  auto* range = channel->add_subcommand("range", "Range of the twirl against the commutant");
  range->add_option("rep", pos, "Representation file")->required()->expected(1);
  range->callback([&] {
    action = [&] {
      const auto c = range_equals_commutant(load_rep(pos[0], cfg));
      return Result{Json{{"range_dim", c.range_dim},
                         {"commutant_dim", c.commutant_dim},
                         {"range_outside_commutant", c.range_outside_commutant},
                         {"commutant_outside_range", c.commutant_outside_range},
                         {"idempotence", c.idempotence},
                         {"pass", c.pass}},
                    c.pass ? kOk : kCertificateFailure};
    };
  });
  auto* props = channel->add_subcommand("properties", "Randomized property probes of the twirl");
  props->add_option("rep", pos, "Representation file")->required()->expected(1);
  props->callback([&] {
    action = [&] {
      const Representation pi = load_rep(pos[0], cfg);
      const auto p = twirl_properties(pi, cfg.seed);
      const double limit = 1e-9 * pi.dim();
      const bool ok = p.idempotence <= limit && p.unitality <= limit && p.trace_preservation <= limit &&
                      p.self_adjointness <= limit && p.covariance <= limit && p.tp_defect <= limit &&
                      p.min_choi_eigenvalue >= -limit;
      return Result{Json{{"idempotence", p.idempotence},
                         {"unitality", p.unitality},
                         {"trace_preservation", p.trace_preservation},
                         {"self_adjointness", p.self_adjointness},
                         {"covariance", p.covariance},
                         {"tp_defect", p.tp_defect},
                         {"min_choi_eigenvalue", p.min_choi_eigenvalue},
                         {"tolerance", limit},
                         {"pass", ok}},
                    ok ? kOk : kCertificateFailure};
    };
  });

  // phase
  auto* phase = app.add_subcommand("phase", "Phase-retrievability bounds, witnesses and checks");
  phase->require_subcommand(1);
  long budget = kDefaultBudget;
  int restarts = kDefaultRestarts;
  std::string kind = "both";
  std::string map_path;
  auto* bound = phase->add_subcommand("bound", "Lower bound max(beta, floor(d/4)+1)");
  bound->add_option("rep", pos, "Representation file")->required()->expected(1);
  bound->callback([&] {
    action = [&] {
      const auto dec = isotypic_decomposition(load_rep(pos[0], cfg), cfg.seed);
      const auto probe = pr_conjecture_probe(dec);
      return Result{Json{{"pr_lower_bound", pr_lower_bound(dec)},
                         {"beta", probe.beta},
                         {"d", dec.d()},
                         {"bracket_k", probe.bracket_k},
                         {"conjectured_pr", probe.value},
                         {"conditional_on_surrogate_bound", probe.conditional_on_surrogate}}};
    };
  });
  auto* witness = phase->add_subcommand("witness", "Phase-retrievable subspace witnesses");
  witness->add_option("rep", pos, "Representation file")->required()->expected(1);
  witness->add_option("--kind", kind, "multiplicity, subspace or both")
      ->check(CLI::IsMember({"multiplicity", "subspace", "both"}))
      ->capture_default_str();
  witness->callback([&] {
    action = [&] {
      const Representation pi = load_rep(pos[0], cfg);
      const auto dec = isotypic_decomposition(pi, cfg.seed);
      Json j{{"pr_lower_bound", pr_lower_bound(dec)}};
      if (kind != "subspace") j["multiplicity"] = io::to_json(multiplicity_pr_witness(pi, dec, cfg.seed));
      if (kind != "multiplicity") j["subspace"] = io::to_json(subspace_pr_witness(pi, dec, cfg.seed));
      return Result{j};
    };
  });
  auto* falsify = phase->add_subcommand("falsify", "Search for a phase-retrieval collision");
  falsify->add_option("frame", pos, "Frame or operator-frame file")->required()->expected(1);
  falsify->add_option("--budget", budget, "Objective evaluations")->capture_default_str();
  falsify->add_option("--restarts", restarts, "Random restarts")->capture_default_str();
  falsify->callback([&] {
    action = [&] {
      const auto frame = io::operator_frame_from_json(io::read_file(pos[0]));
      return Result{io::to_json(pr_falsifier(frame, cfg.seed, budget, restarts))};
    };
  });
  auto* check51 = phase->add_subcommand("check51", "Channel-side versus measurement-side phase retrieval");
  check51->add_option("rep", pos, "Multiplicity-one representation file")->required()->expected(1);
  check51->add_option("--map", map_path, "Matrix file for T (default: the subspace witness)");
  check51->callback([&] {
    action = [&] {
      const Representation pi = load_rep(pos[0], cfg);
      const auto dec = isotypic_decomposition(pi, cfg.seed);
      const Matrix t = map_path.empty() ? subspace_pr_witness(pi, dec, cfg.seed).map : load_matrix(map_path);
      return Result{io::to_json(prop51_equivalence_check(pi, dec, t, cfg.seed))};
    };
  });
  auto* frame_cmd = phase->add_subcommand("frame", "Frame bounds and Parseval normalization");
  frame_cmd->add_option("frame", pos, "Frame file")->required()->expected(1);
  frame_cmd->callback([&] {
    action = [&] { return Result{io::to_json(frame_analysis(io::frame_from_json(io::read_file(pos[0])), cfg.tol))}; };
  });

  std::vector<std::string> argv_store{"twirl_lab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  if (!(cfg.tol > 0.0)) {
    err << "error: --tol must be positive\n";
    return kInputError;
  }
  if (!action) {
    err << "error: no command\n";
    return kInputError;
  }
  try {
    const Result r = action();
    std::string text;
    if (cfg.format == "json") {
      text = io::dump(r.body);
    } else {
      std::ostringstream os;
      render_text(r.body, "", os);
      text = os.str();
    }
    if (cfg.out.empty()) {
      out << text;
    } else {
      io::write_file(cfg.out, text);
    }
    if (r.code == kCertificateFailure) err << "error: certificate failed\n";
    return r.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.is_certificate_failure() ? kCertificateFailure : kInputError;
  } catch (const Json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace twirl::cli
