#include "crysp/poly.hpp"

#include <algorithm>
#include <sstream>

namespace crysp {

PolyRingPtr make_poly_ring(long long p, int n, std::vector<std::string> vars, int root_depth,
                           std::optional<long long> degree_cap) {
    auto r = std::make_shared<PolyRing>();
    r->mod = make_modulus(p, n);
    r->vars = std::move(vars);
    r->root_depth = root_depth;
    r->denom = 1;
    for (int i = 0; i < root_depth; ++i) r->denom *= p;
    r->degree_cap = degree_cap;
    return r;
}

Poly Poly::constant(PolyRingPtr ring, const Zmod& c) {
    Poly f(std::move(ring));
    if (!c.is_zero()) f.terms_[std::vector<long long>(f.ring_->vars.size(), 0)] = c;
    return f;
}

Poly Poly::constant(PolyRingPtr ring, long long c) {
    Zmod z(ring->mod, c);
    return constant(std::move(ring), z);
}

Poly Poly::variable(PolyRingPtr ring, const std::string& name, long long num, long long den) {
    long long idx = -1;
    for (size_t i = 0; i < ring->vars.size(); ++i)
        if (ring->vars[i] == name) idx = static_cast<long long>(i);
    if (idx < 0) throw err("UnknownGenerator", "no variable named " + name);
    if (num < 0) { num = 1; den = 1; }
    if ((num * ring->denom) % den != 0)
        throw err("FractionalExponentOnNonMonoidVariable",
                  "exponent " + std::to_string(num) + "/" + std::to_string(den) +
                      " not in the monoid (denominator " + std::to_string(ring->denom) + ")");
    Poly f(ring);
    std::vector<long long> e(ring->vars.size(), 0);
    e[idx] = num * ring->denom / den;
    f.terms_[e] = Zmod::one(ring->mod);
    f.truncate();
    return f;
}

void Poly::add_term(const std::vector<long long>& exps, const Zmod& c) {
    if (exps.size() != ring_->vars.size()) throw err("ShapeMismatch", "term exponent length");
    auto it = terms_.find(exps);
    if (it == terms_.end()) {
        if (!c.is_zero()) terms_[exps] = c;
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
    truncate();
}

void Poly::truncate() {
    if (!ring_->degree_cap) return;
    long long cap = *ring_->degree_cap * ring_->denom;
    for (auto it = terms_.begin(); it != terms_.end();) {
        long long d = 0;
        for (long long x : it->first) d += x;
        if (d > cap)
            it = terms_.erase(it);
        else
            ++it;
    }
}

Poly operator+(const Poly& a, const Poly& b) {
    if (!a.ring_->compatible(*b.ring_)) throw err("MixedRings", "polynomials over different rings");
    Poly c = a;
    for (const auto& [e, v] : b.terms_) {
        auto it = c.terms_.find(e);
        if (it == c.terms_.end())
            c.terms_[e] = v;
        else {
            it->second += v;
            if (it->second.is_zero()) c.terms_.erase(it);
        }
    }
    c.truncate();
    return c;
}

Poly Poly::operator-() const {
    Poly c = *this;
    for (auto& [e, v] : c.terms_) v = -v;
    return c;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
    if (!a.ring_->compatible(*b.ring_)) throw err("MixedRings", "polynomials over different rings");
    Poly c(a.ring_);
    for (const auto& [ea, va] : a.terms_)
        for (const auto& [eb, vb] : b.terms_) {
            std::vector<long long> e(ea.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            Zmod v = va * vb;
            if (v.is_zero()) continue;
            auto it = c.terms_.find(e);
            if (it == c.terms_.end())
                c.terms_[e] = v;
            else {
                it->second += v;
                if (it->second.is_zero()) c.terms_.erase(it);
            }
        }
    c.truncate();
    return c;
}

bool operator==(const Poly& a, const Poly& b) {
    if (!a.ring_->compatible(*b.ring_)) return false;
    return a.terms_ == b.terms_;
}

Poly Poly::scaled(const Zmod& c) const {
    Poly r(ring_);
    if (c.is_zero()) return r;
    for (const auto& [e, v] : terms_) {
        Zmod w = v * c;
        if (!w.is_zero()) r.terms_[e] = w;
    }
    return r;
}

Poly Poly::pow(long long e) const {
    if (e < 0) throw err("NegativePower", "negative exponent");
    Poly r = Poly::constant(ring_, 1);
    Poly base = *this;
    while (e > 0) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return r;
}

long long Poly::total_degree_numerator() const {
    long long best = -1;
    for (const auto& [e, v] : terms_) {
        long long d = 0;
        for (long long x : e) d += x;
        best = std::max(best, d);
    }
    return best;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, v] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << v.str();
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            os << "*" << ring_->vars[i];
            if (e[i] != ring_->denom) {
                os << "^";
                if (e[i] % ring_->denom == 0)
                    os << (e[i] / ring_->denom);
                else
                    os << "(" << e[i] << "/" << ring_->denom << ")";
            }
        }
    }
    return os.str();
}

Poly substitute(const Poly& f, const std::map<std::string, Poly>& assignments, PolyRingPtr target) {
    const auto& vars = f.ring()->vars;
    /* precollect: which variables occur with fractional exponents */
    std::vector<bool> fractional(vars.size(), false), occurs(vars.size(), false);
    for (const auto& [e, v] : f.terms())
        for (size_t i = 0; i < vars.size(); ++i)
            if (e[i] != 0) {
                occurs[i] = true;
                if (e[i] % f.ring()->denom != 0) fractional[i] = true;
            }
    std::vector<const Poly*> img(vars.size(), nullptr);
    for (size_t i = 0; i < vars.size(); ++i) {
        if (!occurs[i]) continue;
        auto it = assignments.find(vars[i]);
        if (it == assignments.end())
            throw err("UnknownGenerator", "no assignment for variable " + vars[i]);
        img[i] = &it->second;
        if (fractional[i]) {
            /* fractional powers only make sense of a (unit-scaled) single
             * variable; anything else leaves the monoid */
            if (img[i]->terms().size() != 1)
                throw err("FractionalExponentOnNonMonoidVariable",
                          "fractional power of a non-monomial image of " + vars[i]);
        }
    }
    Poly out(target);
    for (const auto& [e, v] : f.terms()) {
        Poly t = Poly::constant(target, v);
        for (size_t i = 0; i < vars.size(); ++i) {
            if (e[i] == 0) continue;
            if (e[i] % f.ring()->denom == 0) {
                t = t * img[i]->pow(e[i] / f.ring()->denom);
            } else {
                /* scaled single-term image: apply the fractional exponent to
                 * the exponent vector; coefficient must be a trivial unit */
                const auto& [ie, iv] = *img[i]->terms().begin();
                if (!(iv == Zmod::one(target->mod)))
                    throw err("FractionalExponentOnNonMonoidVariable",
                              "fractional power of scaled image of " + vars[i]);
                std::vector<long long> se(ie.size());
                for (size_t j = 0; j < ie.size(); ++j) {
                    long long num = ie[j] * e[i];
                    if (num % f.ring()->denom != 0)
                        throw err("FractionalExponentOnNonMonoidVariable",
                                  "image exponent leaves the monoid for " + vars[i]);
                    se[j] = num / f.ring()->denom;
                }
                Poly m(target);
                m.add_term(se, Zmod::one(target->mod));
                t = t * m;
            }
        }
        out = out + t;
    }
    return out;
}

PolyRingPtr twist_ring(const PolyRingPtr& ring) {
    auto r = std::make_shared<PolyRing>(*ring);
    r->twist_level = ring->twist_level + 1;
    return r;
}

Poly frobenius_twist(const Poly& f, TwistStyle style) {
    if (f.ring()->mod->n != 1) throw err("NotCharP", "Frobenius twist needs an F_p coefficient ring");
    PolyRingPtr tw = twist_ring(f.ring());
    Poly out(tw);
    for (const auto& [e, v] : f.terms()) {
        Zmod c = v;
        if (style == TwistStyle::Coefficient) c = v.pow(static_cast<unsigned long>(f.ring()->mod->p));
        out.add_term(e, Zmod(tw->mod, c.value()));
    }
    return out;
}

Poly relative_frobenius(const Poly& f, PolyRingPtr target) {
    if (f.ring()->twist_level != target->twist_level + 1)
        throw err("NotOnTwist", "relative Frobenius needs a twist-level drop of one");
    if (f.ring()->mod->n != 1) throw err("NotCharP", "relative Frobenius needs F_p coefficients");
    long long p = f.ring()->mod->p;
    Poly out(target);
    for (const auto& [e, v] : f.terms()) {
        std::vector<long long> pe(e.size());
        for (size_t i = 0; i < e.size(); ++i) pe[i] = e[i] * p;
        out.add_term(pe, Zmod(target->mod, v.value()));
    }
    return out;
}

}  // namespace crysp
