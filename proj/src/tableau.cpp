#include "mprk/tableau.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mprk/errors.hpp"

namespace mprk {

namespace {

double parse_coeff(const char* text) {
  char* end = nullptr;
  const double v = std::strtod(text, &end);
  if (end == nullptr || *end != '\0') throw Error(std::string("bad coefficient literal: ") + text);
  return v;
}

CoeffMatrix zeros(int q) { return CoeffMatrix(q, std::vector<double>(q, 0.0)); }

std::vector<double> derive_c(const CoeffMatrix& a_high, const CoeffMatrix& a_eps) {
  const int q = static_cast<int>(a_high.size());
  std::vector<double> c(q, 0.0);
  for (int i = 0; i < q; ++i) {
    double acc = 0.0;
    for (int j = 0; j < q; ++j) acc += a_high[i][j] + a_eps[i][j];
    c[i] = acc;
  }
  return c;
}

ButcherTableau finish(std::string name, CoeffMatrix a_high, CoeffMatrix a_eps,
                      std::vector<double> b) {
  ButcherTableau t;
  t.name = std::move(name);
  t.q = static_cast<int>(b.size());
  t.a_high = std::move(a_high);
  t.a_eps = std::move(a_eps);
  t.b = std::move(b);
  t.c = derive_c(t.a_high, t.a_eps);
  return t;
}

// The published coefficients, kept as their 15-digit decimal strings and
// parsed exactly once (strtod rounds correctly, so round-trips are
// bit-identical).
ButcherTableau make_4s3pA() {
  CoeffMatrix ah = zeros(4), ae = zeros(4);
  ae[0][0] = parse_coeff("0.788675134594813");
  ah[1][0] = parse_coeff("0.211324865405187");
  ae[2][0] = parse_coeff("0.051944240459852");
  ah[2][0] = parse_coeff("0.709495523817170");
  ah[2][1] = parse_coeff("-0.86531425061942");
  ae[2][2] = parse_coeff("0.788675134594813");
  ah[3][0] = parse_coeff("0.705123240545107");
  ah[3][1] = parse_coeff("0.943370088535775");
  ah[3][2] = parse_coeff("-0.859818194486069");
  return finish("4s3pA", std::move(ah), std::move(ae), {0.0, 0.5, 0.0, 0.5});
}

ButcherTableau make_4s3pB() {
  CoeffMatrix ah = zeros(4), ae = zeros(4);
  for (int i = 0; i < 4; ++i) ae[i][i] = 0.5;
  ae[1][0] = parse_coeff("-2.376349376129689");
  ah[1][0] = parse_coeff("2.543016042796356");
  ae[2][0] = parse_coeff("-2.951484396921318");
  ah[2][0] = parse_coeff("2.451484396921318");
  ae[2][1] = parse_coeff("0.475891038758779");
  ah[2][1] = parse_coeff("0.024108961241221");
  ae[3][0] = parse_coeff("-0.573861819468268");
  ah[3][0] = parse_coeff("2.073861819468268");
  ae[3][1] = parse_coeff("0.051944240459852");
  // The published high-precision (4,2) entry, 2.367724727682735, is
  // inconsistent: with it the summed matrix violates the second- and
  // third-order conditions (b.c = 2.46) and the method loses A-stability.
  // Every other split in this row sums to a simple rational and row 4 of
  // A_high + A_eps must reproduce b (stiffly accurate, c4 = 1), which pins
  // the sum a42 = -3/2; keeping the published epsilon part fixes the high
  // part as -3/2 - 0.051944240459852.
  ah[3][1] = parse_coeff("-1.551944240459852");
  ae[3][2] = parse_coeff("-1.211868223075524");
  ah[3][2] = parse_coeff("1.711868223075524");
  return finish("4s3pB", std::move(ah), std::move(ae), {1.5, -1.5, 0.5, 0.5});
}

ButcherTableau make_4s3pC() {
  CoeffMatrix ah = zeros(4), ae = zeros(4);
  ae[0][0] = parse_coeff("0.511243008730995");
  ae[1][0] = parse_coeff("-1.999347282862640");
  ah[1][0] = parse_coeff("-0.050470366527530");
  ae[1][1] = parse_coeff("1.957161067302390");
  ae[2][0] = parse_coeff("0.443312893511937");
  ah[2][0] = parse_coeff("0.368613367355336");
  ae[2][1] = parse_coeff("-0.573131033672219");
  ah[2][1] = parse_coeff("0.273504374252976");
  ae[2][2] = parse_coeff("0.128283796414019");
  ae[3][0] = parse_coeff("-2");
  ah[3][0] = parse_coeff("1.803794668975043");
  ae[3][1] = parse_coeff("-0.160330320741428");
  ah[3][1] = parse_coeff("0.097485042980759");
  ae[3][2] = parse_coeff("0.579597314161362");
  ah[3][2] = parse_coeff("-1.895660952342050");
  ae[3][3] = parse_coeff("1.484688928981990");
  return finish("4s3pC", std::move(ah), std::move(ae),
                {parse_coeff("0.002837446974069"), parse_coeff("0.336264433650450"),
                 parse_coeff("0.806376720267787"), parse_coeff("-0.145478600892306")});
}

}  // namespace

const ButcherTableau& builtin_tableau(Method m) {
  static const ButcherTableau a = make_4s3pA();
  static const ButcherTableau b = make_4s3pB();
  static const ButcherTableau c = make_4s3pC();
  switch (m) {
    case Method::M4s3pA: return a;
    case Method::M4s3pB: return b;
    case Method::M4s3pC: return c;
  }
  throw Error("builtin_tableau: unknown method");
}

Method method_from_name(const std::string& name) {
  if (name == "4s3pA") return Method::M4s3pA;
  if (name == "4s3pB") return Method::M4s3pB;
  if (name == "4s3pC") return Method::M4s3pC;
  throw Error("unknown method name: " + name);
}

ButcherTableau midpoint_corrected(int p) {
  if (p < 0) throw Error("midpoint_corrected: corrector count must be nonnegative");
  const int q = p + 1;
  CoeffMatrix ah = zeros(q), ae = zeros(q);
  ae[0][0] = 0.5;
  for (int i = 1; i < q; ++i) ah[i][i - 1] = 0.5;
  std::vector<double> b(q, 0.0);
  b[q - 1] = 1.0;
  return finish("midpoint" + std::to_string(p), std::move(ah), std::move(ae), std::move(b));
}

std::vector<std::string> validate(const ButcherTableau& t) {
  constexpr double kTol = 1e-13;
  std::vector<std::string> violations;
  const int q = t.q;

  auto shape_ok = [q](const CoeffMatrix& m) {
    if (static_cast<int>(m.size()) != q) return false;
    for (const auto& row : m)
      if (static_cast<int>(row.size()) != q) return false;
    return true;
  };
  if (q <= 0) violations.push_back("stage count must be positive");
  if (!shape_ok(t.a_high) || !shape_ok(t.a_eps) || static_cast<int>(t.b.size()) != q ||
      static_cast<int>(t.c.size()) != q) {
    violations.push_back("coefficient blocks must all be q-by-q and q-long");
    return violations;
  }

  for (int i = 0; i < q; ++i) {
    double row = 0.0;
    for (int j = 0; j < q; ++j) row += t.a_high[i][j] + t.a_eps[i][j];
    if (std::abs(row - t.c[i]) > kTol)
      violations.push_back("c[" + std::to_string(i) + "] does not match the row sum of A_high + A_eps");
  }

  double bsum = 0.0;
  for (double w : t.b) bsum += w;
  if (std::abs(bsum - 1.0) > kTol) violations.push_back("sum(b) must be 1");

  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j)
      if (t.a_high[i][j] != 0.0 || t.a_eps[i][j] != 0.0) {
        violations.push_back("A_high + A_eps must be lower triangular");
        i = q;
        break;
      }

  for (int i = 0; i < q; ++i)
    if (t.a_high[i][i] != 0.0) {
      violations.push_back("diagonal (implicit) coefficients must live in A_eps only");
      break;
    }

  return violations;
}

std::string tableau_to_json(const ButcherTableau& t) {
  nlohmann::ordered_json j;
  j["name"] = t.name;
  j["q"] = t.q;
  j["c"] = t.c;
  j["A_high"] = t.a_high;
  j["A_eps"] = t.a_eps;
  j["b"] = t.b;
  return j.dump(2);
}

ButcherTableau tableau_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("tableau JSON does not parse: ") + e.what());
  }
  ButcherTableau t;
  try {
    t.name = j.at("name").get<std::string>();
    t.q = j.at("q").get<int>();
    t.a_high = j.at("A_high").get<CoeffMatrix>();
    t.a_eps = j.at("A_eps").get<CoeffMatrix>();
    t.b = j.at("b").get<std::vector<double>>();
    if (j.contains("c"))
      t.c = j.at("c").get<std::vector<double>>();
    else
      t.c = derive_c(t.a_high, t.a_eps);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("tableau JSON has a wrong field: ") + e.what());
  }
  if (t.q <= 0 || static_cast<int>(t.b.size()) != t.q ||
      static_cast<int>(t.a_high.size()) != t.q || static_cast<int>(t.a_eps.size()) != t.q)
    throw Error("tableau JSON dimensions are inconsistent with q");
  for (const auto& row : t.a_high)
    if (static_cast<int>(row.size()) != t.q) throw Error("A_high rows must have length q");
  for (const auto& row : t.a_eps)
    if (static_cast<int>(row.size()) != t.q) throw Error("A_eps rows must have length q");
  if (static_cast<int>(t.c.size()) != t.q) throw Error("c must have length q");
  return t;
}

}  // namespace mprk
