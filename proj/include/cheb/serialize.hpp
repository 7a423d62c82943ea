#pragma once

#include "cheb/complex.hpp"
#include "cheb/skein.hpp"

#include <json.hpp>

#include <string>

namespace cheb {

using Json = nlohmann::ordered_json;

struct BadJson : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Integers travel as decimal strings.
inline Json to_json(const Integer& x) { return x.str(); }
inline Integer integer_from_json(const Json& j) {
    if (!j.is_string()) throw BadJson("expected an integer string");
    return Integer(j.get<std::string>());
}

inline Json to_json(const LaurentPoly& p) {
    Json a = Json::array();
    for (auto& [e, c] : p.terms()) a.push_back(Json::array({e, to_json(c)}));
    return a;
}
inline LaurentPoly laurent_from_json(const Json& j) {
    std::vector<std::pair<int, Integer>> t;
    for (auto& term : j) t.emplace_back(term.at(0).get<int>(), integer_from_json(term.at(1)));
    return LaurentPoly::from_terms(t);
}

inline Json to_json(const FieldElem& x) {
    Json j;
    j["num"] = to_json(x.num());
    j["den"] = to_json(x.den());
    return j;
}
inline FieldElem field_from_json(const Json& j) { return FieldElem(laurent_from_json(j.at("num")), laurent_from_json(j.at("den"))); }

inline Json to_json(const FlatTangle& t) {
    Json j;
    j["n"] = t.n();
    j["m"] = t.m();
    j["partner"] = t.partners();
    j["circles"] = t.circles();
    return j;
}
inline FlatTangle tangle_from_json(const Json& j) {
    return FlatTangle(j.at("n").get<int>(), j.at("m").get<int>(), j.at("partner").get<std::vector<int>>(), j.at("circles").get<int>());
}

inline Json to_json(const TLElement& x) {
    Json j;
    j["n"] = x.n();
    j["m"] = x.m();
    j["terms"] = Json::array();
    for (auto& [t, c] : x.terms()) j["terms"].push_back({{"tangle", to_json(t)}, {"coeff", to_json(c)}});
    return j;
}
inline TLElement tl_from_json(const Json& j) {
    TLElement r = TLElement::zero(j.at("n").get<int>(), j.at("m").get<int>());
    for (auto& t : j.at("terms")) r.axpy(field_from_json(t.at("coeff")), TLElement::from_tangle(tangle_from_json(t.at("tangle"))));
    return r;
}

inline Json to_json(const Cobordism& c) {
    Json j;
    j["source"] = to_json(c.source());
    j["target"] = to_json(c.target());
    j["terms"] = Json::array();
    for (auto& [m, k] : c.terms()) j["terms"].push_back({{"dots", std::to_string(m)}, {"coeff", to_json(k)}});
    return j;
}
inline Cobordism cobordism_from_json(const Json& j) {
    FlatTangle s = tangle_from_json(j.at("source")), t = tangle_from_json(j.at("target"));
    Cobordism r = Cobordism::zero(s, t);
    for (auto& term : j.at("terms"))
        r += Cobordism::disks(s, t, std::stoull(term.at("dots").get<std::string>()), field_from_json(term.at("coeff")));
    return r;
}

inline Json to_json(const ZPoly& p) {
    Json j = Json::object();
    for (auto& [k, c] : p.coeffs) j[std::to_string(k)] = to_json(c);
    return j;
}
inline ZPoly zpoly_from_json(const Json& j) {
    ZPoly r;
    for (auto& [k, c] : j.items()) r.add(std::stoi(k), field_from_json(c));
    return r;
}

namespace detail {

inline Json object_json(const FlatTangle& o) { return to_json(o); }
inline Json object_json(const TLBase::Object& o) { return {{"n", o.n}, {"idem", to_json(o.idem)}}; }
inline Json morphism_json(const Cobordism& m) { return to_json(m); }
inline Json morphism_json(const TLElement& m) { return to_json(m); }

template <class Base>
typename Base::Object object_from(const Json& j) {
    if constexpr (std::is_same_v<Base, BNBase>) return tangle_from_json(j);
    else return {j.at("n").get<int>(), tl_from_json(j.at("idem"))};
}
template <class Base>
typename Base::Morphism morphism_from(const Json& j) {
    if constexpr (std::is_same_v<Base, BNBase>) return cobordism_from_json(j);
    else return tl_from_json(j);
}

}  // namespace detail

template <class Base>
Json to_json(const Complex<Base>& c) {
    Json j;
    j["base"] = Base::name;
    j["n"] = c.n();
    j["m"] = c.m();
    j["low_cut"] = c.low_cut == INT_MIN ? Json(nullptr) : Json(c.low_cut);
    j["generators"] = Json::array();
    for (auto& [id, g] : c.generators())
        j["generators"].push_back({{"id", id}, {"tdeg", g.tdeg}, {"qshift", g.qshift}, {"label", g.label}, {"object", detail::object_json(g.object)}});
    j["differential"] = Json::array();
    for (auto& [id, g] : c.generators())
        for (auto& [to, m] : c.out(id)) j["differential"].push_back({{"from", id}, {"to", to}, {"morphism", detail::morphism_json(m)}});
    return j;
}

template <class Base>
Complex<Base> complex_from_json(const Json& j) {
    if (j.at("base").get<std::string>() != Base::name) throw BadJson("complex over a different base");
    Complex<Base> c(j.at("n").get<int>(), j.at("m").get<int>());
    for (auto& g : j.at("generators"))
        c.add_with_id(g.at("id").get<int>(), detail::object_from<Base>(g.at("object")), g.at("qshift").get<int>(), g.at("tdeg").get<int>(),
                      g.at("label").get<std::string>());
    for (auto& e : j.at("differential")) c.set(e.at("from").get<int>(), e.at("to").get<int>(), detail::morphism_from<Base>(e.at("morphism")));
    if (!j.at("low_cut").is_null()) c.low_cut = j.at("low_cut").get<int>();
    return c;
}

template <class Base>
Json to_json(const ChainMap<Base>& f) {
    Json j;
    j["tdeg"] = f.tdeg;
    j["entries"] = Json::array();
    for (auto& [a, row] : f.entries)
        for (auto& [b, m] : row) j["entries"].push_back({{"from", a}, {"to", b}, {"morphism", detail::morphism_json(m)}});
    return j;
}

template <class Base>
ChainMap<Base> chain_map_from_json(const Json& j) {
    ChainMap<Base> f;
    f.tdeg = j.at("tdeg").get<int>();
    for (auto& e : j.at("entries")) f.add(e.at("from").get<int>(), e.at("to").get<int>(), detail::morphism_from<Base>(e.at("morphism")));
    return f;
}

/// Structural equality of complexes: same ids, objects, shifts and differential entries.
template <class Base>
bool same_complex(const Complex<Base>& a, const Complex<Base>& b) {
    if (a.n() != b.n() || a.m() != b.m() || a.low_cut != b.low_cut || a.size() != b.size()) return false;
    for (auto& [id, g] : a.generators()) {
        if (!b.contains(id)) return false;
        const auto& h = b.gen(id);
        if (!(g.object == h.object) || g.qshift != h.qshift || g.tdeg != h.tdeg || g.label != h.label) return false;
        if (a.out(id).size() != b.out(id).size()) return false;
        for (auto& [to, m] : a.out(id)) {
            auto it = b.out(id).find(to);
            if (it == b.out(id).end() || !(it->second == m)) return false;
        }
    }
    return true;
}

}  // namespace cheb
