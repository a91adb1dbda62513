#include "fractim/job.hpp"

#include <fstream>
#include <sstream>

#include "fractim/image.hpp"
#include "fractim/oracle.hpp"

namespace fractim {

namespace {

using nlohmann::json;

Scalar scalar_from_json(const json& j, const std::string& what) {
  if (j.is_number()) return Scalar::of(j.get<double>());
  if (j.is_string()) {
    auto s = Scalar::parse(j.get<std::string>());
    if (!s) throw InvariantError("cannot parse " + what + " value '" + j.get<std::string>() + "'");
    return *s;
  }
  throw InvariantError(what + " must be a number or a fraction string");
}

PeriodicSeq<Scalar> scalar_seq_from_json(const json& j, const std::string& what) {
  PeriodicSeq<Scalar> seq;
  if (j.is_array()) {  // plain array means a pure period
    for (const auto& e : j) seq.period.push_back(scalar_from_json(e, what));
    return seq;
  }
  if (j.contains("pre"))
    for (const auto& e : j.at("pre")) seq.pre.push_back(scalar_from_json(e, what));
  for (const auto& e : j.at("period")) seq.period.push_back(scalar_from_json(e, what));
  return seq;
}

PeriodicSeq<int> int_seq_from_json(const json& j) {
  PeriodicSeq<int> seq;
  if (j.is_array()) {
    for (const auto& e : j) seq.period.push_back(e.get<int>());
    return seq;
  }
  if (j.contains("pre"))
    for (const auto& e : j.at("pre")) seq.pre.push_back(e.get<int>());
  for (const auto& e : j.at("period")) seq.period.push_back(e.get<int>());
  return seq;
}

HomogeneousIFS homogeneous_from_json(const json& j) {
  Scalar lambda = scalar_from_json(j.at("lambda"), "lambda");
  std::vector<Scalar> shifts;
  for (const auto& e : j.at("shifts")) shifts.push_back(scalar_from_json(e, "shift"));
  return HomogeneousIFS(lambda, std::move(shifts));
}

FractalSpec fractal_from_json(const json& j) {
  FractalSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "moran") {
    spec.kind = FractalSpec::Kind::Moran;
    spec.moran.emplace(scalar_seq_from_json(j.at("c"), "c"), int_seq_from_json(j.at("n")),
                       scalar_from_json(j.at("kappa"), "kappa"));
  } else if (kind == "homogeneous") {
    spec.kind = FractalSpec::Kind::Homogeneous;
    spec.homogeneous.emplace(homogeneous_from_json(j));
  } else if (kind == "general") {
    spec.kind = FractalSpec::Kind::General;
    std::vector<AffineMap> maps;
    for (const auto& e : j.at("maps"))
      maps.push_back(AffineMap{scalar_from_json(e.at(0), "map ratio"),
                               scalar_from_json(e.at(1), "map shift")});
    spec.general.emplace(std::move(maps));
    if (j.contains("witness")) {
      const json& w = j.at("witness");
      spec.witness_ifs.emplace(homogeneous_from_json(w));
      for (const auto& e : w.at("words")) spec.witness_words.push_back(e.get<std::string>());
    }
  } else {
    throw InvariantError("unknown fractal kind '" + kind + "'");
  }
  return spec;
}

bool same_fractal(const FractalSpec& a, const FractalSpec& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == FractalSpec::Kind::Moran) return *a.moran == *b.moran;
  auto ifs_eq = [](const HomogeneousIFS& x, const HomogeneousIFS& y) {
    if (x.size() != y.size() || !scalar_eq(x.ratio, y.ratio)) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!scalar_eq(x.shifts[i], y.shifts[i])) return false;
    return true;
  };
  if (a.kind == FractalSpec::Kind::Homogeneous) return ifs_eq(*a.homogeneous, *b.homogeneous);
  const GeneralIFS& ga = *a.general;
  const GeneralIFS& gb = *b.general;
  if (ga.size() != gb.size()) return false;
  for (std::size_t i = 0; i < ga.size(); ++i)
    if (!scalar_eq(ga.maps[i].ratio, gb.maps[i].ratio) ||
        !scalar_eq(ga.maps[i].shift, gb.maps[i].shift))
      return false;
  return true;
}

}  // namespace

Job job_from_json(const json& j) {
  if (!j.contains("schema") || j.at("schema").get<int>() != 1)
    throw InvariantError("job file must declare \"schema\": 1");
  Job job;
  job.function = j.at("function").get<std::string>();
  job.fractal1 = fractal_from_json(j.at("fractal1"));
  if (!j.contains("fractal2") || (j.at("fractal2").is_string() && j.at("fractal2") == "same")) {
    job.fractal2 = job.fractal1;
  } else {
    job.fractal2 = fractal_from_json(j.at("fractal2"));
  }
  if (j.contains("domain")) {
    const json& d = j.at("domain");
    const std::string kind = d.at("kind").get<std::string>();
    if (kind == "level-boxes") {
      job.restricted = true;
      job.level_p = d.at("p").get<int>();
      if (job.level_p < 1) throw InvariantError("restriction level must be at least 1");
    } else if (kind != "unit-square") {
      throw InvariantError("unknown domain kind '" + kind + "'");
    }
  }
  if (j.contains("budget")) job.budget = j.at("budget").get<long>();
  if (j.contains("kmax")) job.kmax = j.at("kmax").get<int>();
  if (j.contains("oracle_depth")) job.oracle_depth = j.at("oracle_depth").get<int>();
  if (j.contains("merge_tol")) job.tol.image_merge = j.at("merge_tol").get<double>();
  if (j.contains("image_tol")) job.tol.compare = j.at("image_tol").get<double>();
  if (j.contains("oracle_tol")) job.tol.oracle_merge = j.at("oracle_tol").get<double>();
  if (j.contains("strategy")) job.strategy = placement_from_string(j.at("strategy").get<std::string>());
  if (j.contains("seeds")) {
    job.seed1 = j.at("seeds").at(0).get<std::uint64_t>();
    job.seed2 = j.at("seeds").at(1).get<std::uint64_t>();
  }
  // The theorems address pairs from one class; a mixed pair is not a job.
  if (job.fractal1.kind != job.fractal2.kind)
    throw InvariantError("fractal1 and fractal2 must have the same kind");
  if (job.fractal1.kind == FractalSpec::Kind::Moran && !(*job.fractal1.moran == *job.fractal2.moran))
    throw InvariantError("both Moran specs must describe the same class");
  if (job.fractal1.kind == FractalSpec::Kind::General && !same_fractal(job.fractal1, job.fractal2))
    throw InvariantError("general-IFS jobs certify f(K,K); both specs must match");
  return job;
}

Job job_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvariantError("cannot open job file '" + path + "'");
  json j;
  in >> j;
  return job_from_json(j);
}

json to_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

json to_json(const IntervalSet& s) {
  json arr = json::array();
  for (const Interval& iv : s.items()) arr.push_back(to_json(iv));
  return arr;
}

namespace {

json to_json(const Witness& w) {
  json j;
  j["condition"] = w.condition;
  j["box"] = {{"x", to_json(w.box.x)}, {"y", to_json(w.box.y)}};
  j["enclosure"] = to_json(w.enclosure);
  return j;
}

}  // namespace

json to_json(const Verdict& v) {
  json j;
  j["status"] = to_string(v.status);
  if (v.sign_case) j["sign_case"] = to_string(*v.sign_case);
  if (!v.conclusion.empty()) j["conclusion"] = v.conclusion;
  if (v.witness) j["witness"] = to_json(*v.witness);
  j["stats"] = {{"boxes", v.stats.boxes}, {"max_depth", v.stats.max_depth}};
  json conds = json::array();
  for (const ConditionReport& c : v.conditions) {
    json cj;
    cj["id"] = c.id;
    cj["status"] = to_string(c.status);
    if (c.witness) cj["witness"] = to_json(*c.witness);
    cj["boxes"] = c.stats.boxes;
    conds.push_back(cj);
  }
  j["conditions"] = conds;
  return j;
}

namespace {

// Detects f = x + s*y: fx identically 1, fy a nonzero constant.
std::optional<Scalar> linear_slope(const PartialBundle& b) {
  auto cx = b.fx.constant_value();
  auto cy = b.fy.constant_value();
  if (cx && cy && *cx == 1.0 && *cy != 0.0) return Scalar::of(*cy);
  return std::nullopt;
}

struct Pipeline {
  Job job;
  PartialBundle bundle;
  DomainSpec dom;
  json constants;

  explicit Pipeline(const Job& j) : job(j), bundle(PartialBundle::of(Expr::parse(j.function))), dom(DomainSpec::unit_square()) {
    if (job.restricted) {
      dom = DomainSpec::level_boxes(side_intervals(job.fractal1, job.level_p, job.seed1),
                                    side_intervals(job.fractal2, job.level_p, job.seed2));
    }
  }

  std::vector<Interval> side_intervals(const FractalSpec& spec, int k, std::uint64_t seed) const {
    switch (spec.kind) {
      case FractalSpec::Kind::Moran:
        return level_intervals(realize(*spec.moran, std::max(k, 1), job.strategy, seed), k);
      case FractalSpec::Kind::Homogeneous:
        return cylinders(*spec.homogeneous, k);
      case FractalSpec::Kind::General:
        return cylinders(*spec.general, k);
    }
    throw Error("bad fractal kind");
  }

  Verdict certify() {
    SearchBudget budget{job.budget, 40};
    Verdict v;
    switch (job.fractal1.kind) {
      case FractalSpec::Kind::Moran: {
        const MoranClass& cls = *job.fractal1.moran;
        v = certify_moran(bundle, cls, dom, budget);
        LevelSummary s = distinct_levels(cls);
        json levels = json::array();
        for (const LevelParams& lp : s.levels)
          levels.push_back({{"c", lp.c.v}, {"n", lp.n}, {"span", lp.span.v}});
        constants["levels"] = levels;
        constants["ratio_window"] = {ratio_lo_upper(cls), ratio_hi_lower(cls)};
        constants["unit_slope_covers"] = s.unit_slope_covers;
        if (auto s2 = linear_slope(bundle)) {
          Verdict lin = certify_linear(cls, *s2);
          constants["linear"] = to_json(lin);
          constants["slope"] = s2->v;
        }
        break;
      }
      case FractalSpec::Kind::Homogeneous: {
        const HomogeneousIFS& k1 = *job.fractal1.homogeneous;
        const HomogeneousIFS& k2 = *job.fractal2.homogeneous;
        v = certify_ifs(bundle, k1, k2, dom, budget);
        constants["lambda"] = k1.ratio.v;
        constants["tau1"] = gap_profile(k1).max_gap.v;
        constants["tau2"] = gap_profile(k2).max_gap.v;
        constants["ratio_window"] = {gap_profile(k1).max_gap.v,
                                     (k1.ratio / gap_profile(k2).max_gap).v};
        break;
      }
      case FractalSpec::Kind::General: {
        if (!job.fractal1.witness_ifs)
          throw InvariantError("general-IFS certification needs an explicit sub-IFS witness");
        SandwichResult res = certify_sandwich(bundle, *job.fractal1.general,
                                              *job.fractal1.witness_ifs,
                                              job.fractal1.witness_words, budget);
        v = res.verdict;
        if (res.image) constants["hull_image"] = to_json(*res.image);
        constants["witness_words"] = job.fractal1.witness_words;
        break;
      }
    }
    return v;
  }
};

int exit_code_of(Status s) {
  switch (s) {
    case Status::Certified: return 0;
    case Status::ConditionsViolated: return 1;
    case Status::Unknown: return 2;
  }
  return 3;
}

}  // namespace

RunResult run_certify(const Job& job) {
  Pipeline p(job);
  Verdict v = p.certify();
  RunResult out;
  out.exit_code = exit_code_of(v.status);
  out.report["command"] = "certify";
  out.report["function"] = job.function;
  out.report["verdict"] = to_json(v);
  out.report["constants"] = p.constants;
  std::ostringstream human;
  human << "verdict: " << to_string(v.status) << "\n";
  if (v.sign_case) human << "sign case: " << to_string(*v.sign_case) << "\n";
  if (!v.conclusion.empty()) human << "conclusion: " << v.conclusion << "\n";
  for (const ConditionReport& c : v.conditions)
    human << "  " << c.id << ": " << to_string(c.status) << " (" << c.stats.boxes << " boxes)\n";
  if (v.witness) human << "witness: " << v.witness->condition << "\n";
  out.human = human.str();
  return out;
}

RunResult run_image(const Job& job, bool force) {
  Pipeline p(job);
  Verdict v = p.certify();
  std::optional<SignCase> sc;
  if (v.certified()) {
    sc = v.sign_case;
  } else if (!force) {
    throw InvariantError(
        "image pipeline requires a certified job; pass --force for the "
        "non-rigorous corner fallback");
  }

  LevelFn c_fn = [&](int k) { return p.side_intervals(job.fractal1, k, job.seed1); };
  LevelFn d_fn = [&](int k) { return p.side_intervals(job.fractal2, k, job.seed2); };
  LevelImageReport rep = stabilization_report(p.bundle, sc, c_fn, d_fn, job.kmax,
                                              job.tol.compare, job.tol.image_merge);

  RunResult out;
  out.exit_code = rep.all_stabilized ? 0 : 1;
  out.report["command"] = "image";
  out.report["function"] = job.function;
  out.report["mode"] = sc ? "certified" : "corner-enumeration (non-rigorous)";
  out.report["verdict"] = to_json(v);
  json rows = json::array();
  for (const LevelImageRow& r : rep.rows) {
    rows.push_back({{"k", r.k},
                    {"image", to_json(r.image)},
                    {"components", r.components},
                    {"hausdorff_prev", r.hausdorff_prev},
                    {"nested", r.nested_in_prev},
                    {"stabilized_next", r.stabilized_next}});
  }
  out.report["levels"] = rows;
  out.report["all_stabilized"] = rep.all_stabilized;
  out.report["all_nested"] = rep.all_nested;
  std::ostringstream human;
  human << "mode: " << out.report["mode"].get<std::string>() << "\n";
  for (const LevelImageRow& r : rep.rows)
    human << "  k=" << r.k << ": " << r.components << " component(s)\n";
  human << (rep.all_stabilized ? "stabilized at every level\n" : "not stabilized\n");
  out.human = human.str();
  return out;
}

RunResult run_oracle(const Job& job) {
  Pipeline p(job);
  auto depth_for = [&](const FractalSpec& spec) {
    if (job.oracle_depth) return *job.oracle_depth;
    std::size_t maps = spec.kind == FractalSpec::Kind::Moran ? 2
                       : spec.kind == FractalSpec::Kind::Homogeneous
                           ? spec.homogeneous->size()
                           : spec.general->size();
    return maps >= 3 ? 6 : 8;
  };
  auto samples_for = [&](const FractalSpec& spec, std::uint64_t seed) {
    int depth = depth_for(spec);
    switch (spec.kind) {
      case FractalSpec::Kind::Moran:
        return sample_points(realize(*spec.moran, depth, job.strategy, seed), depth);
      case FractalSpec::Kind::Homogeneous:
        return sample_points(*spec.homogeneous, depth);
      case FractalSpec::Kind::General:
        return sample_points(*spec.general, depth);
    }
    throw Error("bad fractal kind");
  };
  std::vector<double> xs = samples_for(job.fractal1, job.seed1);
  std::vector<double> ys = samples_for(job.fractal2, job.seed2);
  IntervalSet image = brute_force_image(p.bundle, xs, ys, job.tol.oracle_merge);

  RunResult out;
  out.exit_code = 0;
  out.report["command"] = "oracle";
  out.report["function"] = job.function;
  out.report["points"] = {xs.size(), ys.size()};
  out.report["pairs"] = xs.size() * ys.size();
  out.report["merge_tol"] = job.tol.oracle_merge;
  out.report["image"] = to_json(image);
  out.report["components"] = image.size();
  out.report["min"] = image.min();
  out.report["max"] = image.max();
  std::ostringstream human;
  human << "oracle: " << xs.size() << " x " << ys.size() << " samples, " << image.size()
        << " component(s) in [" << image.min() << ", " << image.max() << "]\n";
  out.human = human.str();
  return out;
}

}  // namespace fractim
