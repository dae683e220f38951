#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sosh/exactpoly.hpp"
#include "sosh/polytope.hpp"

namespace sosh {

// sigma * x^m <= sum_j lambda_j x^{v_j} + lambda0 for even v_j, scaled by
// magnitude and subtracted from the polynomial. sigma = +1 dominates a
// negative coefficient, sigma = -1 a positive non-even one.
struct AmgmInequality {
    MultiIndex m;
    int sigma = 1;
    Rational magnitude;
    std::vector<MultiIndex> v;
    RVector lambda;
    Rational lambda0;
};

struct AmgmCertificate {
    int nvars = 0;
    std::vector<AmgmInequality> inequalities;
};

struct CertificateCheck {
    bool ok = false;
    std::string reason;
    MultiIndex failing;
};

class CertificateError : public std::runtime_error {
public:
    CertificateError(const std::string& what, MultiIndex m) : std::runtime_error(what), monomial(std::move(m)) {}
    MultiIndex monomial;
};

class InconclusiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool is_even(const MultiIndex& e);

// the sum of scaled inequality brackets; P - T must be a sum of positive even terms
SparsePolynomial certificate_polynomial(const AmgmCertificate& cert);
CertificateCheck verify_certificate(const SparsePolynomial& p, const AmgmCertificate& cert);

// verifies a supplied certificate, or searches for one when none is given
AmgmCertificate certify_nonnegative(const SparsePolynomial& p,
                                    const std::optional<AmgmCertificate>& cert = std::nullopt);

struct NotSosWitness {
    MultiIndex m;
    Rational coeff;
    std::vector<MultiIndex> examined;  // lattice points of C_P / 2
};

NotSosWitness certify_not_sos(const SparsePolynomial& p);

struct GeneratorInstance {
    int n = 0;
    std::vector<MultiIndex> q;  // half vertices
    MultiIndex m;               // target monomial, m = 2p
    RVector lambda;             // barycentric weights of m against 2q_j
    Rational lambda0;
    mpz_class det_q;            // |det Q|
    mpz_class scale;            // lcm of weight denominators
    Rational c = 0;             // single-zero coefficient
};

GeneratorInstance make_instance(const std::vector<MultiIndex>& q, const MultiIndex& m, const Rational& c = 0);
SparsePolynomial construct_candidate(const GeneratorInstance& inst);
AmgmCertificate generator_certificate(const GeneratorInstance& inst);

struct SearchStats {
    long long examined = 0;
    long long tuples = 0;
    bool exhaustive = false;
};

std::vector<GeneratorInstance> direct_search(int n, int d, long long budget, std::uint64_t seed,
                                             const Rational& c = 0, int max_hits = 1,
                                             SearchStats* stats = nullptr);

struct LiftResult {
    SparsePolynomial lifted;
    AmgmCertificate cert;
    SparsePolynomial restricted;  // lifted with the new variable set to 1
};

LiftResult homogenize_lift(const SparsePolynomial& p, const AmgmCertificate& cert, const Rational& c = 1);

// offsets r are full-coordinate even integers, one per vertex; r0 for the target
GeneratorInstance degree_lift(const GeneratorInstance& inst, const std::vector<int>& r, int r0, int s);

// exact rational point where p < 0, if a deterministic probe finds one
std::optional<RVector> find_negative_point(const SparsePolynomial& p);

// p = z^T Q z with z the basis monomials and Q positive semidefinite
struct SosGram {
    int nvars = 0;
    std::vector<MultiIndex> basis;
    RMatrix gram;
};

CertificateCheck verify_sos_gram(const SparsePolynomial& p, const SosGram& g);
// Gram certificate shipped for a table row key such as "2x12"
std::optional<SosGram> table_gram(const std::string& key);

enum class RowStatus { Pass, Fail, SourceDefect };
const char* to_string(RowStatus s);

struct TableRow {
    int n = 0;
    int d = 0;
    std::string printed;    // polynomial as listed
    std::string used;       // polynomial actually checked
    std::string note;
    RowStatus status = RowStatus::Fail;
    bool nonneg = false;
    bool not_sos = false;
    std::string not_sos_method;
    std::string reason;
    std::optional<AmgmCertificate> cert;
    std::optional<NotSosWitness> witness;
    std::optional<RVector> negative_point;
    std::optional<SosGram> gram;
};

struct TableRowSpec {
    int n;
    int d;
    std::string printed;
    std::string used;
    std::string note;
};

const std::vector<TableRowSpec>& table_rows();
std::vector<TableRow> reproduce_table(const std::string& filter = "");

std::string to_json(const AmgmCertificate& cert);
AmgmCertificate certificate_from_json(const std::string& text);
std::string rational_string(const Rational& r);

}  // namespace sosh
