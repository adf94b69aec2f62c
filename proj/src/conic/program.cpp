#include "riscf/conic/program.hpp"

#include <stdexcept>

namespace riscf::conic {

namespace {
using nlohmann::json;

json expr_to_json(const RealExpr& e) {
  json terms = json::array();
  for (const auto& [i, c] : e.terms) terms.push_back({i, c});
  return {{"c", e.constant}, {"terms", terms}};
}

RealExpr expr_from_json(const json& j) {
  RealExpr e;
  e.constant = j.at("c").get<double>();
  for (const auto& t : j.at("terms")) e.add(t[0].get<int>(), t[1].get<double>());
  return e;
}

json cmat_to_json(const MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

MatrixXcd cmat_from_json(const json& rows) {
  const std::size_t nr = rows.size();
  const std::size_t nc = nr ? rows[0].size() : 0;
  MatrixXcd m(nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          Complex(rows[r][c][0].get<double>(), rows[r][c][1].get<double>());
  return m;
}

json herm_to_json(const HermExpr& e) {
  json terms = json::array();
  for (const auto& [i, m] : e.terms)
    terms.push_back({{"i", i}, {"m", cmat_to_json(m)}});
  return {{"dim", e.dim()}, {"c", cmat_to_json(e.constant)}, {"terms", terms}};
}

HermExpr herm_from_json(const json& j) {
  HermExpr e(j.at("dim").get<int>());
  e.constant = cmat_from_json(j.at("c"));
  for (const auto& t : j.at("terms"))
    e.terms.emplace_back(t.at("i").get<int>(), cmat_from_json(t.at("m")));
  return e;
}

const char* census_name(CensusClass c) {
  switch (c) {
    case CensusClass::lmi: return "lmi";
    case CensusClass::soc: return "soc";
    default: return "none";
  }
}

CensusClass census_from_name(const std::string& s) {
  if (s == "lmi") return CensusClass::lmi;
  if (s == "soc") return CensusClass::soc;
  return CensusClass::none;
}

}  // namespace

ScalarVar ConicProgram::add_scalar(const std::string& name, bool nonneg) {
  VarInfo info;
  info.name = name;
  info.base = n_reals_;
  info.nonneg = nonneg;
  vars_.push_back(info);
  return ScalarVar{n_reals_++};
}

HermVar ConicProgram::add_hermitian(const std::string& name, int dim) {
  if (dim < 1) throw std::invalid_argument("add_hermitian: dim must be >= 1");
  VarInfo info;
  info.name = name;
  info.is_matrix = true;
  info.dim = dim;
  info.base = n_reals_;
  vars_.push_back(info);
  HermVar v{n_reals_, dim};
  n_reals_ += herm_param_count(dim);
  return v;
}

void ConicProgram::maximize(const RealExpr& objective) {
  objective_ = objective;
  objective_.normalize();
}

void ConicProgram::add_eq(RealExpr expr, const std::string& family, CensusClass census) {
  expr.normalize();
  linear_.push_back({std::move(expr), true, family, census});
}

void ConicProgram::add_ineq(RealExpr expr, const std::string& family,
                            CensusClass census) {
  expr.normalize();
  linear_.push_back({std::move(expr), false, family, census});
}

void ConicProgram::add_soc(RealExpr bound, std::vector<RealExpr> rows,
                           const std::string& family, CensusClass census) {
  bound.normalize();
  for (auto& r : rows) r.normalize();
  socs_.push_back({std::move(bound), std::move(rows), family, census});
}

void ConicProgram::add_soc(RealExpr bound, const CVecExpr& v, const std::string& family,
                           CensusClass census) {
  add_soc(std::move(bound), cvec_rows(v), family, census);
}

void ConicProgram::add_lmi(HermExpr mat, const std::string& family, CensusClass census) {
  lmis_.push_back({std::move(mat), family, census});
}

void ConicProgram::add_psd(const HermVar& x, const std::string& family,
                           CensusClass census) {
  add_lmi(herm_var_expr(x), family, census);
}

ConicProgram::Census ConicProgram::census() const {
  Census c;
  auto count = [&c](CensusClass cls) {
    if (cls == CensusClass::lmi) ++c.lmi;
    if (cls == CensusClass::soc) ++c.soc;
  };
  for (const auto& l : linear_) count(l.census);
  for (const auto& s : socs_) count(s.census);
  for (const auto& l : lmis_) count(l.census);
  return c;
}

nlohmann::json ConicProgram::to_json() const {
  json j;
  j["num_reals"] = n_reals_;
  json vars = json::array();
  for (const auto& v : vars_)
    vars.push_back({{"name", v.name},
                    {"matrix", v.is_matrix},
                    {"dim", v.dim},
                    {"base", v.base},
                    {"nonneg", v.nonneg}});
  j["vars"] = vars;
  j["objective"] = expr_to_json(objective_);
  json lin = json::array();
  for (const auto& l : linear_)
    lin.push_back({{"expr", expr_to_json(l.expr)},
                   {"eq", l.equality},
                   {"family", l.family},
                   {"census", census_name(l.census)}});
  j["linear"] = lin;
  json socs = json::array();
  for (const auto& s : socs_) {
    json rows = json::array();
    for (const auto& r : s.rows) rows.push_back(expr_to_json(r));
    socs.push_back({{"bound", expr_to_json(s.bound)},
                    {"rows", rows},
                    {"family", s.family},
                    {"census", census_name(s.census)}});
  }
  j["soc"] = socs;
  json lmis = json::array();
  for (const auto& l : lmis_)
    lmis.push_back({{"mat", herm_to_json(l.mat)},
                    {"family", l.family},
                    {"census", census_name(l.census)}});
  j["lmi"] = lmis;
  return j;
}

ConicProgram ConicProgram::from_json(const nlohmann::json& doc) {
  ConicProgram p;
  for (const auto& v : doc.at("vars")) {
    if (v.at("matrix").get<bool>())
      p.add_hermitian(v.at("name").get<std::string>(), v.at("dim").get<int>());
    else
      p.add_scalar(v.at("name").get<std::string>(), v.at("nonneg").get<bool>());
  }
  if (p.n_reals_ != doc.at("num_reals").get<int>())
    throw std::invalid_argument("program document: variable layout mismatch");
  p.objective_ = expr_from_json(doc.at("objective"));
  for (const auto& l : doc.at("linear")) {
    RealExpr e = expr_from_json(l.at("expr"));
    const auto census = census_from_name(l.at("census").get<std::string>());
    if (l.at("eq").get<bool>())
      p.add_eq(std::move(e), l.at("family").get<std::string>(), census);
    else
      p.add_ineq(std::move(e), l.at("family").get<std::string>(), census);
  }
  for (const auto& s : doc.at("soc")) {
    std::vector<RealExpr> rows;
    for (const auto& r : s.at("rows")) rows.push_back(expr_from_json(r));
    p.add_soc(expr_from_json(s.at("bound")), std::move(rows),
              s.at("family").get<std::string>(),
              census_from_name(s.at("census").get<std::string>()));
  }
  for (const auto& l : doc.at("lmi"))
    p.add_lmi(herm_from_json(l.at("mat")), l.at("family").get<std::string>(),
              census_from_name(l.at("census").get<std::string>()));
  return p;
}

}  // namespace riscf::conic
