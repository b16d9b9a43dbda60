#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "splitcubic/certificate.hpp"
#include "splitcubic/exponents.hpp"
#include "splitcubic/expsums.hpp"
#include "splitcubic/kernels.hpp"
#include "splitcubic/local.hpp"
#include "splitcubic/search.hpp"

namespace splitcubic::cli {

using nlohmann::json;

namespace {

// Shortest JSON representation of x rounded to 15 significant digits.
json num15(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::strtod(buf, nullptr);
}

json complex_json(std::complex<double> z) { return {{"re", num15(z.real())}, {"im", num15(z.imag())}}; }

json arc_point_json(const RationalArcPoint& p) { return {{"a", p.a}, {"q", p.q}, {"beta", num15(p.beta)}}; }

std::int64_t parse_int(const std::string& s, const char* what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw PreconditionError(std::string(what) + " must be an integer, got '" + s + "'");
  }
  if (used != s.size()) throw PreconditionError(std::string(what) + " must be an integer, got '" + s + "'");
  return v;
}

double parse_real(const std::string& s, const char* what) {
  if (s.find('/') != std::string::npos) return parse_rational(s).get_d();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw PreconditionError(std::string(what) + " must be a number, got '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v))
    throw PreconditionError(std::string(what) + " must be a number, got '" + s + "'");
  return v;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  return parts;
}

// "0.5,-0.5" or a single value broadcast to every coordinate
std::vector<double> parse_center(const std::string& s, int n) {
  auto parts = split_commas(s);
  std::vector<double> z;
  for (const auto& p : parts) z.push_back(parse_real(p, "center coordinate"));
  if (z.size() == 1) z.assign(static_cast<std::size_t>(n), z[0]);
  if (static_cast<int>(z.size()) != n)
    throw PreconditionError("center has " + std::to_string(z.size()) + " coordinates, form has " + std::to_string(n));
  return z;
}

struct Context {
  std::string form_path;
  std::string out_path;
  std::string budget_text;
  int threads = 1;
  std::string seed_text;
  Budget budget;
  json inputs = json::object();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  CubicForm form() {
    if (form_path.empty()) throw PreconditionError("--form FILE is required for this subcommand");
    inputs[form_path] = sha256_file(form_path);
    return load_form(form_path);
  }
  std::uint64_t seed() const {
    if (seed_text.empty()) throw PreconditionError("--seed N is required for randomized estimators");
    const auto s = parse_int(seed_text, "--seed");
    if (s < 0) throw PreconditionError("--seed must be non-negative");
    return static_cast<std::uint64_t>(s);
  }
};

json manifest(const Context& ctx, const CLI::App& root, const CLI::App& sub) {
  json params = json::object();
  auto collect = [&](const CLI::App& app) {
    for (const CLI::Option* o : app.get_options()) {
      if (o->get_name() == "--help" || o->count() == 0) continue;
      const auto& r = o->results();
      std::string key = o->get_name();
      while (!key.empty() && key[0] == '-') key.erase(0, 1);
      if (o->get_type_size() == 0) params[key] = true;
      else params[key] = r.size() == 1 ? json(r[0]) : json(r);
    }
  };
  collect(root);
  collect(sub);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
  return {{"tool", "splitcubic"},
          {"version", kToolVersion},
          {"subcommand", sub.get_name()},
          {"parameters", params},
          {"input_digests", ctx.inputs},
          {"wall_time_s", num15(wall)},
          {"kernel_isa", kernels::isa_name(kernels::active_isa())},
          {"budget",
           {{"points_cap", ctx.budget.points},
            {"table_entries_cap", ctx.budget.table_entries},
            {"points_consumed", points_consumed()}}}};
}

json error_object(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

json conditions_with_verdict(const ConditionReport& r) {
  json j = conditions_to_json(r);
  return {{"conditions", j}, {"part_i", r.holds_for_part_i()}, {"part_ii", r.holds_for_part_ii()}};
}

}  // namespace

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open " + path);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::ostringstream hex;
  for (unsigned i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  reset_points_consumed();
  Context ctx;
  CLI::App app{"Exponent certificates, exponential sums and zero counts for split cubic forms", "splitcubic"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--form", ctx.form_path, "cubic form JSON document");
  app.add_option("--out", ctx.out_path, "also write the result JSON to this file");
  app.add_option("--budget", ctx.budget_text, "cap on form evaluations (default from SPLITCUBIC_BUDGET or 1e9)");
  app.add_option("--threads", ctx.threads, "worker threads for lattice sums")->check(CLI::Range(1, 256));
  app.add_option("--seed", ctx.seed_text, "seed for randomized estimators");

  std::function<json()> action;
  int status_on_success = 0;
  auto sub = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };

  // exponents
  std::string n_s, t_s, lambda_s, v_s, arc_s, region_s, case_s, verify_s;
  bool remark14 = false;
  auto* params = sub("params", "derived parameter set of the minor-arc lemma");
  params->add_option("--n", n_s)->required();
  params->add_option("--t", t_s)->required();
  params->add_option("--lambda", lambda_s)->required();
  params->callback([&] {
    action = [&] {
      return json{{"params", params_to_json(lemma8_params(parse_rational(n_s), parse_rational(t_s),
                                                                parse_rational(lambda_s)))}};
    };
  });

  auto* check = sub("check", "evaluate the condition list for (n, t, Lambda) at v");
  check->add_option("--n", n_s)->required();
  check->add_option("--v", v_s)->required();
  check->add_option("--t", t_s)->required();
  check->add_option("--lambda", lambda_s)->required();
  check->callback([&] {
    action = [&] {
      const auto p = lemma8_params(parse_rational(n_s), parse_rational(t_s), parse_rational(lambda_s));
      json j = conditions_with_verdict(check_conditions(p, parse_rational(v_s)));
      j["params"] = params_to_json(p);
      return j;
    };
  });

  auto* l7 = sub("bound-lemma7", "exponent of the v-th moment over an arc family A(A,B,C)");
  l7->add_option("--n", n_s)->required();
  l7->add_option("--v", v_s)->required();
  l7->add_option("--t", t_s)->required();
  l7->add_option("--arc", arc_s, "A,B,C")->required();
  l7->add_flag("--remark14", remark14, "use the sharpened bound on the minor-arc part (needs nv > 16)");
  l7->callback([&] {
    action = [&] {
      const auto abc = split_commas(arc_s);
      if (abc.size() != 3) throw PreconditionError("--arc expects A,B,C");
      const Rational n = parse_rational(n_s), v = parse_rational(v_s);
      const AugmentedExponent t(parse_rational(t_s)), A(parse_rational(abc[0])), C(parse_rational(abc[2]));
      const Rational B = parse_rational(abc[1]);
      const Lemma7Terms r = remark14 ? remark14_terms(n, v, t, A, B, C) : lemma7_terms(n, v, t, A, B, C);
      return json{{"bound", to_json(r.bound)},
                  {"bound_text", r.bound.to_string()},
                  {"first", to_json(r.first)},
                  {"second", to_json(r.second)},
                  {"regime", r.regime},
                  {"variant", std::string(remark14 ? "remark14" : "lemma7")}};
    };
  });

  auto* l9 = sub("optimize-lemma9", "maximize the fourth-moment exponent over a region in (a, b)");
  l9->add_option("--region", region_s)->required();
  l9->callback([&] {
    action = [&] {
      const auto region = parse_region(region_s);
      const auto r = lemma9_maximum(region);
      json verts = json::array();
      for (const auto& p : region.vertices()) verts.push_back({{"a", to_json(p.a)}, {"b", to_json(p.b)}});
      return json{{"exponent", to_json(r.value)},
                  {"exponent_text", r.value.to_string()},
                  {"branch", r.branch},
                  {"term", r.attained.term},
                  {"argmax", {{"a", to_json(r.attained.argmax.a)}, {"b", to_json(r.attained.argmax.b)}}},
                  {"region", region.to_string()},
                  {"vertices", verts}};
    };
  });

  auto* cert = sub("certify", "build or verify an exponent certificate");
  auto* case_opt = cert->add_option("--case", case_s, "128 or 119");
  auto* verify_opt = cert->add_option("--verify", verify_s, "certificate JSON file to replay");
  case_opt->excludes(verify_opt);
  cert->callback([&] {
    action = [&]() -> json {
      if (!verify_s.empty()) {
        ctx.inputs[verify_s] = sha256_file(verify_s);
        std::ifstream in(verify_s);
        json doc;
        try {
          doc = json::parse(in);
        } catch (const json::exception& e) {
          throw PreconditionError("malformed certificate JSON: " + std::string(e.what()));
        }
        const auto r = verify_certificate(certificate_from_json(doc));
        json j{{"verified", r.ok}, {"message", r.message}};
        j["failing_step"] = r.failing_step ? json(*r.failing_step) : json(nullptr);
        if (!r.ok) status_on_success = 2;
        return j;
      }
      if (case_s.empty()) throw PreconditionError("certify needs --case or --verify");
      return certificate_to_json(certify_case(case_s));
    };
  });

  // expsums
  std::string alpha_s, P_s, rho_s, center_s, a_s, q_s, qmax_s, bmax_s, k_s, coeff_s, Delta_s = "1/10";
  std::string samples_s, resolution_s, eta_s, method_s = "auto", height_s, p_s, kk_s = "1", blocks_s;
  bool allow_singular = false, certify_insoluble = false;

  auto* sum = sub("sum", "cubic exponential sum S(alpha) over a box");
  sum->add_option("--alpha", alpha_s, "p/q (exact) or a decimal real")->required();
  sum->add_option("--P", P_s)->required();
  sum->add_option("--rho", rho_s)->required();
  sum->add_option("--center", center_s, "comma list, or one value for every coordinate")->required();
  sum->callback([&] {
    action = [&] {
      const auto f = ctx.form();
      BoxRegion box{parse_center(center_s, f.n()), parse_real(rho_s, "--rho"), parse_int(P_s, "--P")};
      const auto alpha = parse_alpha(alpha_s);
      SumOptions opt;
      opt.threads = ctx.threads;
      opt.budget = ctx.budget;
      const auto s = weyl_sum(f, box, alpha, opt);
      return json{{"S", complex_json(s)},
                  {"abs", num15(std::abs(s))},
                  {"alpha", arc_point_json(alpha)},
                  {"lattice_points", num15(box.lattice_points())}};
    };
  });

  auto* csum = sub("complete-sum", "complete sum S_{a,q}");
  csum->add_option("--a", a_s)->required();
  csum->add_option("--q", q_s)->required();
  csum->callback([&] {
    action = [&] {
      const auto f = ctx.form();
      const auto q = parse_int(q_s, "--q");
      const auto s = complete_sum(f, parse_int(a_s, "--a"), q, ctx.budget);
      return json{{"S", complex_json(s)}, {"abs", num15(std::abs(s))},
                  {"trivial_bound", num15(std::pow(static_cast<double>(q), f.n()))}};
    };
  });

  auto* ss = sub("sing-series", "partial sum of the singular series with a decay report");
  ss->add_option("--qmax", qmax_s)->required();
  ss->callback([&] {
    action = [&] {
      const auto f = ctx.form();
      const auto r = singular_series(f, static_cast<int>(parse_int(qmax_s, "--qmax")), ctx.budget);
      json blocks = json::array(), partial = json::array();
      for (double b : r.blocks) blocks.push_back(num15(b));
      for (double b : r.partial_sums) partial.push_back(num15(b));
      return json{{"value", num15(r.value)},
                  {"q_max", r.q_max},
                  {"blocks", blocks},
                  {"partial_sums", partial},
                  {"tail",
                   {{"fitted_decay", num15(r.fitted_decay)},
                    {"reference_decay", num15(r.reference_decay)},
                    {"tail_estimate", r.tail_estimate ? num15(*r.tail_estimate) : json(nullptr)}}}};
    };
  });

  auto* si = sub("sing-integral", "singular integral over a box around a real zero");
  si->add_option("--center", center_s, "JSON file with the centre, a comma list, or 'auto'")->required();
  si->add_option("--rho", rho_s)->required();
  si->add_option("--bmax", bmax_s)->required();
  si->add_option("--samples", samples_s, "Monte Carlo samples (default 2000000)");
  si->add_option("--resolution", resolution_s, "quadrature nodes per oscillation (default 2)");
  si->add_option("--eta", eta_s, "Monte Carlo window half-width");
  si->add_flag("--allow-singular-center", allow_singular);
  si->callback([&] {
    action = [&] {
      const auto f = ctx.form();
      std::vector<double> z;
      if (center_s == "auto") {
        z = find_real_center(f, ctx.seed());
      } else if (std::filesystem::is_regular_file(center_s)) {
        ctx.inputs[center_s] = sha256_file(center_s);
        std::ifstream in(center_s);
        json doc;
        try {
          doc = json::parse(in);
          if (doc.is_object()) doc = doc.at("z");
          z = doc.get<std::vector<double>>();
        } catch (const json::exception& e) {
          throw PreconditionError("centre file must hold a JSON array of reals: " + std::string(e.what()));
        }
        if (static_cast<int>(z.size()) != f.n()) throw PreconditionError("centre dimension does not match the form");
      } else {
        z = parse_center(center_s, f.n());
      }
      SingularIntegralOptions opt;
      opt.b_max = parse_real(bmax_s, "--bmax");
      opt.seed = ctx.seed();
      opt.seed_set = true;
      opt.budget = ctx.budget;
      opt.require_nonsingular_center = !allow_singular;
      if (!samples_s.empty()) opt.samples = static_cast<std::uint64_t>(parse_int(samples_s, "--samples"));
      if (!resolution_s.empty()) opt.nodes_per_oscillation = static_cast<int>(parse_int(resolution_s, "--resolution"));
      if (!eta_s.empty()) opt.eta = parse_real(eta_s, "--eta");
      const auto r = singular_integral(f, z, parse_real(rho_s, "--rho"), opt);
      json zj = json::array();
      for (double v : z) zj.push_back(num15(v));
      return json{{"value", num15(r.value)},
                  {"center", zj},
                  {"convergence",
                   {{"truncated", num15(r.value_truncated)},
                    {"half_range", num15(r.value_half_range)},
                    {"tail_bound", num15(r.tail_bound)},
                    {"beta_nodes", r.beta_nodes},
                    {"converged", r.converged}}},
                  {"monte_carlo",
                   {{"density", num15(r.mc_density)},
                    {"stderr", num15(r.mc_stderr)},
                    {"eta", num15(r.eta)},
                    {"samples", r.samples},
                    {"seed", r.seed},
                    {"relative_gap", num15(r.relative_gap)}}},
                  {"center_check", {{"value", num15(r.center_value)}, {"gradient_sup", num15(r.center_gradient)}}}};
    };
  });

  auto* mom = sub("moment", "k-th moment of a 1- or 2-variable sum, by counting solutions");
  mom->add_option("--coeff", coeff_s, "use the one-variable form coeff*x^3 instead of --form");
  mom->add_option("--k", k_s)->required();
  mom->add_option("--P", P_s)->required();
  mom->callback([&] {
    action = [&] {
      CubicForm f(1);
      if (!coeff_s.empty()) {
        if (!ctx.form_path.empty()) throw PreconditionError("give either --coeff or --form, not both");
        f.add_term(0, 0, 0, BigInt(static_cast<long>(parse_int(coeff_s, "--coeff"))));
      } else {
        f = ctx.form();
      }
      const auto r = moment_by_counting(f, static_cast<int>(parse_int(k_s, "--k")), parse_int(P_s, "--P"), ctx.budget);
      return json{{"k", r.k}, {"P", r.P}, {"count", r.count_value.get_str()}, {"note", r.note}};
    };
  });

  auto* cls = sub("classify", "major/minor arc classification of alpha");
  cls->add_option("--alpha", alpha_s)->required();
  cls->add_option("--P", P_s)->required();
  cls->add_option("--Delta", Delta_s, "rational, default 1/10");
  cls->callback([&] {
    action = [&] {
      const auto c = arc_classify(parse_real(alpha_s, "--alpha"), parse_int(P_s, "--P"), parse_rational(Delta_s));
      json j{{"major", c.major}};
      if (c.major) j["point"] = arc_point_json(c.point);
      return j;
    };
  });

  // local
  auto* loc = sub("local", "zero counts modulo p^k, witnesses and descent certificates");
  loc->add_option("--p", p_s)->required();
  loc->add_option("--k", kk_s, "exponent (default 1)");
  loc->add_flag("--certify-insoluble", certify_insoluble);
  loc->add_option("--blocks", blocks_s, "variable groups u/v/w, e.g. 1,2,3/4,5,6/7,8,9");
  loc->callback([&] {
    action = [&] {
      const auto f = ctx.form();
      const auto p = parse_int(p_s, "--p");
      const auto k = parse_int(kk_s, "--k");
      if (p < 2 || k < 1) throw PreconditionError("local needs p >= 2 and k >= 1");
      if (certify_insoluble) {
        if (blocks_s.empty()) throw PreconditionError("--certify-insoluble needs --blocks");
        const auto outcome =
            build_descent_certificate(f, static_cast<std::uint64_t>(p), parse_blocks(blocks_s, f.n()), ctx.budget);
        if (outcome.certificate) return json{{"certified", true}, {"certificate", descent_to_json(*outcome.certificate)}};
        return json{{"certified", false},
                    {"failing_block", outcome.failing_block + 1},
                    {"counterexample", outcome.counterexample}};
      }
      json j{{"p", p}, {"k", k}};
      j["count"] = count_zeros_mod(f, static_cast<std::uint64_t>(p), static_cast<unsigned>(k), ctx.budget);
      const auto w = find_local_witness(f, static_cast<std::uint64_t>(p), static_cast<unsigned>(k), ctx.budget);
      j["witness"] = w ? witness_to_json(*w) : json(nullptr);
      return j;
    };
  });

  // search
  auto* cnt = sub("count", "exact number of zeros of the form in a box");
  cnt->add_option("--P", P_s)->required();
  cnt->add_option("--rho", rho_s)->required();
  cnt->add_option("--center", center_s)->required();
  cnt->add_option("--method", method_s, "auto, direct or meet-in-middle")
      ->check(CLI::IsMember({"auto", "direct", "meet-in-middle"}));
  cnt->callback([&] {
    action = [&] {
      const auto f = ctx.form();
      BoxRegion box{parse_center(center_s, f.n()), parse_real(rho_s, "--rho"), parse_int(P_s, "--P")};
      const CountMethod m = method_s == "direct"           ? CountMethod::direct
                            : method_s == "meet-in-middle" ? CountMethod::meet_in_middle
                                                           : CountMethod::automatic;
      const auto r = count_zeros_box(f, box, m, ctx.budget);
      json z = json::array();
      for (double v : box.z) z.push_back(num15(v));
      return json{{"P", r.P},
                  {"box", {{"z", z}, {"rho", num15(box.rho)}, {"P", box.P}}},
                  {"count", r.count.get_str()},
                  {"method", method_name(r.method)},
                  {"elapsed_s", num15(r.elapsed.count())},
                  {"peak_table_entries", r.peak_table_entries}};
    };
  });

  auto* srch = sub("search", "primitive zero of least height");
  srch->add_option("--height", height_s)->required();
  srch->callback([&] {
    action = [&] {
      const auto f = ctx.form();
      const auto r = find_point(f, parse_int(height_s, "--height"), ctx.budget);
      const char* status = r.status == PointStatus::found               ? "found"
                           : r.status == PointStatus::none_up_to_height ? "none_exists_up_to_height"
                                                                        : "budget_exhausted";
      json j{{"status", status}, {"completed_height", r.completed_height}};
      j["point"] = r.point ? json(*r.point) : json(nullptr);
      if (r.status == PointStatus::budget_exhausted) status_on_success = 3;
      return j;
    };
  });

  auto* self = sub("selftest", "golden-value suite");
  self->callback([&] {
    action = [&] {
      const json checks = selftest_checks();
      bool ok = true;
      for (const auto& c : checks) ok = ok && c.at("ok").get<bool>();
      if (!ok) status_on_success = 1;
      return json{{"passed", ok}, {"checks", checks}};
    };
  });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_object("usage", e.what()).dump() << "\n";
    return 2;
  }

  const CLI::App* chosen = app.get_subcommands().at(0);
  try {
    ctx.budget = Budget::from_environment();
    if (!ctx.budget_text.empty()) {
      const auto b = parse_int(ctx.budget_text, "--budget");
      if (b < 1) throw PreconditionError("--budget must be positive");
      ctx.budget.points = static_cast<std::uint64_t>(b);
    }
    json result = action();
    result["manifest"] = manifest(ctx, app, *chosen);
    const std::string text = result.dump(2);
    if (!ctx.out_path.empty()) {
      std::ofstream f(ctx.out_path);
      if (!f) throw PreconditionError("cannot write " + ctx.out_path);
      f << text << "\n";
    }
    out << text << "\n";
    if (status_on_success == 2) err << error_object("verification", "certificate did not replay").dump() << "\n";
    if (status_on_success == 3) err << error_object("budget", "search budget exhausted before height_max").dump() << "\n";
    return status_on_success;
  } catch (const BudgetExceeded& e) {
    err << error_object("budget", e.what()).dump() << "\n";
    return 3;
  } catch (const PreconditionError& e) {
    err << error_object("precondition", e.what()).dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << error_object("internal", e.what()).dump() << "\n";
    return 1;
  }
}

}  // namespace splitcubic::cli
