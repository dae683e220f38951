#include "sosh/exactpoly.hpp"

#include <cctype>
#include <stdexcept>

#include <json.hpp>

namespace sosh {

using json = nlohmann::ordered_json;

SparsePolynomial SparsePolynomial::constant(int nvars, const Rational& c) {
    SparsePolynomial p(nvars);
    p.add_term(MultiIndex(nvars, 0), c);
    return p;
}

SparsePolynomial SparsePolynomial::monomial(const MultiIndex& e, const Rational& c) {
    SparsePolynomial p(static_cast<int>(e.size()));
    p.add_term(e, c);
    return p;
}

SparsePolynomial SparsePolynomial::variable(int nvars, int i) {
    MultiIndex e(nvars, 0);
    e.at(i) = 1;
    return monomial(e);
}

Rational SparsePolynomial::coeff(const MultiIndex& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

void SparsePolynomial::add_term(const MultiIndex& e, const Rational& c) {
    if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("exponent length mismatch");
    for (int v : e)
        if (v < 0) throw std::invalid_argument("negative exponent");
    if (c == 0) return;
    Rational cc = c;
    cc.canonicalize();
    auto [it, inserted] = terms_.try_emplace(e, cc);
    if (!inserted) {
        it->second += cc;
        if (it->second == 0) terms_.erase(it);
    }
}

static void check_dims(const SparsePolynomial& p, const SparsePolynomial& q) {
    if (p.nvars() != q.nvars()) throw std::invalid_argument("dimension mismatch");
}

SparsePolynomial add(const SparsePolynomial& p, const SparsePolynomial& q) {
    check_dims(p, q);
    SparsePolynomial r = p;
    for (const auto& [e, c] : q.terms()) r.add_term(e, c);
    return r;
}

SparsePolynomial sub(const SparsePolynomial& p, const SparsePolynomial& q) {
    check_dims(p, q);
    SparsePolynomial r = p;
    for (const auto& [e, c] : q.terms()) r.add_term(e, -c);
    return r;
}

SparsePolynomial mul(const SparsePolynomial& p, const SparsePolynomial& q) {
    check_dims(p, q);
    SparsePolynomial r(p.nvars());
    for (const auto& [e1, c1] : p.terms())
        for (const auto& [e2, c2] : q.terms()) r.add_term(sosh::add(e1, e2), c1 * c2);
    return r;
}

SparsePolynomial scale(const SparsePolynomial& p, const Rational& c) {
    SparsePolynomial r(p.nvars());
    for (const auto& [e, v] : p.terms()) r.add_term(e, v * c);
    return r;
}

SparsePolynomial pow(const SparsePolynomial& p, int e) {
    if (e < 0) throw std::invalid_argument("negative power");
    SparsePolynomial r = SparsePolynomial::constant(p.nvars(), 1);
    for (int i = 0; i < e; ++i) r = mul(r, p);
    return r;
}

SparsePolynomial operator+(const SparsePolynomial& p, const SparsePolynomial& q) { return add(p, q); }
SparsePolynomial operator-(const SparsePolynomial& p, const SparsePolynomial& q) { return sub(p, q); }
SparsePolynomial operator*(const SparsePolynomial& p, const SparsePolynomial& q) { return mul(p, q); }
SparsePolynomial operator*(const Rational& c, const SparsePolynomial& p) { return scale(p, c); }

Rational evaluate(const SparsePolynomial& p, const std::vector<Rational>& point) {
    if (static_cast<int>(point.size()) != p.nvars()) throw std::invalid_argument("dimension mismatch");
    Rational s = 0;
    for (const auto& [e, c] : p.terms()) {
        Rational t = c;
        for (size_t i = 0; i < e.size(); ++i) {
            mpq_class f;
            mpz_pow_ui(f.get_num_mpz_t(), point[i].get_num_mpz_t(), e[i]);
            mpz_pow_ui(f.get_den_mpz_t(), point[i].get_den_mpz_t(), e[i]);
            t *= f;
        }
        s += t;
    }
    return s;
}

double evaluate(const SparsePolynomial& p, const std::vector<double>& point) {
    if (static_cast<int>(point.size()) != p.nvars()) throw std::invalid_argument("dimension mismatch");
    double s = 0;
    for (const auto& [e, c] : p.terms()) {
        double t = c.get_d();
        for (size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k) t *= point[i];
        s += t;
    }
    return s;
}

int degree(const SparsePolynomial& p) {
    int d = -1;
    for (const auto& [e, c] : p.terms()) d = std::max(d, order(e));
    return d;
}

std::vector<MultiIndex> support(const SparsePolynomial& p) {
    std::vector<MultiIndex> s;
    for (const auto& [e, c] : p.terms()) s.push_back(e);
    return s;
}

SparsePolynomial homogenize(const SparsePolynomial& p) { return homogenize(p, std::max(0, degree(p))); }

SparsePolynomial homogenize(const SparsePolynomial& p, int d) {
    SparsePolynomial r(p.nvars() + 1);
    for (const auto& [e, c] : p.terms()) {
        if (order(e) > d) throw std::invalid_argument("homogenization degree below polynomial degree");
        MultiIndex f = e;
        f.push_back(d - order(e));
        r.add_term(f, c);
    }
    return r;
}

SparsePolynomial derivative(const SparsePolynomial& p, int var) {
    SparsePolynomial r(p.nvars());
    for (const auto& [e, c] : p.terms()) {
        if (e.at(var) == 0) continue;
        MultiIndex f = e;
        --f[var];
        r.add_term(f, c * e[var]);
    }
    return r;
}

SparsePolynomial derivative(const SparsePolynomial& p, const MultiIndex& beta) {
    SparsePolynomial r = p;
    for (size_t i = 0; i < beta.size(); ++i)
        for (int k = 0; k < beta[i]; ++k) r = derivative(r, static_cast<int>(i));
    return r;
}

SparsePolynomial substitute(const SparsePolynomial& p, int var, const SparsePolynomial& q) {
    check_dims(p, q);
    SparsePolynomial r(p.nvars());
    std::vector<SparsePolynomial> powers{SparsePolynomial::constant(p.nvars(), 1)};
    for (const auto& [e, c] : p.terms()) {
        while (static_cast<int>(powers.size()) <= e.at(var)) powers.push_back(mul(powers.back(), q));
        MultiIndex f = e;
        f[var] = 0;
        r = add(r, mul(SparsePolynomial::monomial(f, c), powers[e[var]]));
    }
    return r;
}

SparsePolynomial fix_variable(const SparsePolynomial& p, int var, const Rational& value) {
    SparsePolynomial r(p.nvars() - 1);
    for (const auto& [e, c] : p.terms()) {
        MultiIndex f = e;
        f.erase(f.begin() + var);
        Rational v;
        mpz_pow_ui(v.get_num_mpz_t(), value.get_num_mpz_t(), e[var]);
        mpz_pow_ui(v.get_den_mpz_t(), value.get_den_mpz_t(), e[var]);
        r.add_term(f, c * v);
    }
    return r;
}

SparsePolynomial extend(const SparsePolynomial& p, int nvars) {
    SparsePolynomial r(nvars);
    for (const auto& [e, c] : p.terms()) {
        MultiIndex f = e;
        f.resize(nvars, 0);
        r.add_term(f, c);
    }
    return r;
}

std::string variable_name(int nvars, int i) {
    static const char* short_names[] = {"x", "y", "z", "w"};
    if (nvars <= 4) return short_names[i];
    return "x" + std::to_string(i + 1);
}

std::string to_string(const SparsePolynomial& p) {
    if (p.is_zero()) return "0";
    std::string s;
    // descending lexicographic order reads like the usual written form
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [e, c] = *it;
        Rational a = abs(c);
        bool first = s.empty();
        if (c < 0) s += first ? "-" : " - ";
        else if (!first) s += " + ";
        bool constant = is_zero(e);
        if (a != 1 || constant) {
            s += a.get_str();
            if (!constant) s += "*";
        }
        bool sep = false;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (sep) s += "*";
            s += variable_name(p.nvars(), static_cast<int>(i));
            if (e[i] > 1) s += "^" + std::to_string(e[i]);
            sep = true;
        }
    }
    return s;
}

namespace {

// grammar: poly := ['+'|'-'] term { ('+'|'-') term }
//          term := factor { ['*'] factor },  factor := number['/'number] | var['^'int]
class Parser {
public:
    Parser(const std::string& t, int n) : text_(t), n_(n) {}

    SparsePolynomial run() {
        SparsePolynomial r(n_);
        skip();
        bool neg = false;
        if (peek() == '+' || peek() == '-') neg = get() == '-';
        while (true) {
            SparsePolynomial t = term();
            r = neg ? sub(r, t) : add(r, t);
            skip();
            if (pos_ >= text_.size()) break;
            char c = get();
            if (c != '+' && c != '-') fail("expected + or -");
            neg = c == '-';
        }
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& why) {
        throw std::invalid_argument("polynomial parse error at " + std::to_string(pos_) + ": " + why);
    }
    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() {
        skip();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    char get() {
        char c = peek();
        ++pos_;
        return c;
    }
    std::string digits() {
        skip();
        size_t b = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (b == pos_) fail("expected digits");
        return text_.substr(b, pos_ - b);
    }
    int var_index() {
        skip();
        if (n_ <= 4) {
            std::string name(1, text_[pos_]);
            for (int i = 0; i < n_; ++i)
                if (variable_name(n_, i) == name) {
                    ++pos_;
                    return i;
                }
            fail("unknown variable");
        }
        if (text_[pos_] != 'x') fail("unknown variable");
        ++pos_;
        int i = std::stoi(digits()) - 1;
        if (i < 0 || i >= n_) fail("variable index out of range");
        return i;
    }
    SparsePolynomial factor() {
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num = digits();
            std::string den = "1";
            if (peek() == '/') {
                get();
                den = digits();
            }
            mpz_class zn(num), zd(den);
            if (zd == 0) throw std::invalid_argument("parse: zero denominator");
            Rational v(zn, zd);
            v.canonicalize();
            return SparsePolynomial::constant(n_, v);
        }
        if (c == '(') {
            get();
            size_t depth = 1, b = pos_;
            while (pos_ < text_.size() && depth) {
                if (text_[pos_] == '(') ++depth;
                if (text_[pos_] == ')') --depth;
                ++pos_;
            }
            if (depth) fail("unbalanced parenthesis");
            SparsePolynomial inner = Parser(text_.substr(b, pos_ - 1 - b), n_).run();
            if (peek() == '^') {
                get();
                inner = pow(inner, std::stoi(digits()));
            }
            return inner;
        }
        if (!std::isalpha(static_cast<unsigned char>(c))) fail("expected factor");
        int v = var_index();
        int e = 1;
        if (peek() == '^') {
            get();
            e = std::stoi(digits());
        }
        MultiIndex m(n_, 0);
        m[v] = e;
        return SparsePolynomial::monomial(m);
    }
    SparsePolynomial term() {
        SparsePolynomial t = factor();
        while (true) {
            char c = peek();
            if (c == '*') {
                get();
                t = mul(t, factor());
            } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '(') {
                t = mul(t, factor());
            } else {
                return t;
            }
        }
    }

    std::string text_;
    int n_;
    size_t pos_ = 0;
};

[[noreturn]] void reject(const std::string& why) { throw std::invalid_argument("polynomial json: " + why); }

}  // namespace

SparsePolynomial parse_polynomial(const std::string& text, int nvars) { return Parser(text, nvars).run(); }

std::string to_json(const SparsePolynomial& p) {
    json j;
    j["nvars"] = p.nvars();
    j["terms"] = json::array();
    for (const auto& [e, c] : p.terms())
        j["terms"].push_back({{"exp", e}, {"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}});
    return j.dump();
}

SparsePolynomial from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        reject(std::string("malformed: ") + e.what());
    }
    if (!j.is_object() || !j.contains("nvars") || !j.contains("terms")) reject("missing nvars or terms");
    if (!j["nvars"].is_number_integer() || j["nvars"].get<int>() < 1) reject("bad nvars");
    if (!j["terms"].is_array()) reject("terms must be an array");
    int n = j["nvars"].get<int>();
    SparsePolynomial p(n);
    const MultiIndex* prev = nullptr;
    MultiIndex last;
    for (const auto& t : j["terms"]) {
        if (!t.is_object() || !t.contains("exp") || !t.contains("num") || !t.contains("den")) reject("bad term");
        if (!t["num"].is_string() || !t["den"].is_string() || !t["exp"].is_array()) reject("bad term types");
        MultiIndex e;
        for (const auto& v : t["exp"]) {
            if (!v.is_number_integer() || v.get<int>() < 0) reject("bad exponent");
            e.push_back(v.get<int>());
        }
        if (static_cast<int>(e.size()) != n) reject("exponent length differs from nvars");
        if (prev && !(last < e)) reject("terms not strictly sorted");
        mpz_class num, den;
        std::string ns = t["num"].get<std::string>(), ds = t["den"].get<std::string>();
        auto decimal = [](const std::string& s, bool sign) {
            if (s.empty()) return false;
            size_t i = (sign && s[0] == '-') ? 1 : 0;
            if (i == s.size()) return false;
            for (; i < s.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
            return true;
        };
        if (!decimal(ns, true) || !decimal(ds, false)) reject("coefficient is not a decimal string");
        num = mpz_class(ns);
        den = mpz_class(ds);
        if (den <= 0) reject("denominator must be positive");
        if (num == 0) reject("zero coefficient");
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        if (g != 1) reject("coefficient not in lowest terms");
        p.add_term(e, Rational(num, den));
        last = e;
        prev = &last;
    }
    return p;
}

}  // namespace sosh
