#pragma once

// Solver-agnostic conic program: scalar and Hermitian matrix variables, a
// linear objective, and constraints drawn from {linear equality, linear
// inequality, second-order cone, linear matrix inequality}. Constraints carry
// a family label and a census class so a built program can be audited against
// the modeled formulation; auxiliary epigraph cones introduced purely by the
// conic rewriting are tagged CensusClass::none and stay out of the audit.

#include <string>
#include <vector>

#include <json.hpp>

#include "riscf/conic/expr.hpp"

namespace riscf::conic {

enum class CensusClass { lmi, soc, none };

struct LinearConstraint {
  RealExpr expr;  // expr == 0 or expr >= 0
  bool equality = false;
  std::string family;
  CensusClass census = CensusClass::none;
};

struct SocConstraint {
  RealExpr bound;              // ||rows|| <= bound
  std::vector<RealExpr> rows;
  std::string family;
  CensusClass census = CensusClass::none;
};

struct LmiConstraint {
  HermExpr mat;  // mat >= 0 (PSD)
  std::string family;
  CensusClass census = CensusClass::none;
};

struct VarInfo {
  std::string name;
  bool is_matrix = false;
  int dim = 1;       // matrix dimension when is_matrix
  int base = 0;      // first real slot
  bool nonneg = false;
};

class ConicProgram {
public:
  ScalarVar add_scalar(const std::string& name, bool nonneg = false);
  HermVar add_hermitian(const std::string& name, int dim);

  void maximize(const RealExpr& objective);

  void add_eq(RealExpr expr, const std::string& family,
              CensusClass census = CensusClass::none);
  void add_ineq(RealExpr expr, const std::string& family,
                CensusClass census = CensusClass::none);
  void add_soc(RealExpr bound, std::vector<RealExpr> rows, const std::string& family,
               CensusClass census = CensusClass::none);
  void add_soc(RealExpr bound, const CVecExpr& v, const std::string& family,
               CensusClass census = CensusClass::none);
  void add_lmi(HermExpr mat, const std::string& family,
               CensusClass census = CensusClass::none);
  // X >= 0 for a declared Hermitian variable.
  void add_psd(const HermVar& x, const std::string& family,
               CensusClass census = CensusClass::none);

  int num_reals() const { return n_reals_; }
  const RealExpr& objective() const { return objective_; }
  const std::vector<VarInfo>& vars() const { return vars_; }
  const std::vector<LinearConstraint>& linear() const { return linear_; }
  const std::vector<SocConstraint>& socs() const { return socs_; }
  const std::vector<LmiConstraint>& lmis() const { return lmis_; }

  struct Census {
    int lmi = 0;
    int soc = 0;
  };
  Census census() const;

  nlohmann::json to_json() const;
  static ConicProgram from_json(const nlohmann::json& doc);

private:
  int n_reals_ = 0;
  std::vector<VarInfo> vars_;
  RealExpr objective_;
  std::vector<LinearConstraint> linear_;
  std::vector<SocConstraint> socs_;
  std::vector<LmiConstraint> lmis_;
};

}  // namespace riscf::conic
