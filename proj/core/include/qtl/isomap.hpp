#ifndef QTL_ISOMAP_HPP
#define QTL_ISOMAP_HPP

#include <functional>
#include <string>
#include <vector>

#include "qtl/algebra.hpp"
#include "qtl/matrix.hpp"
#include "qtl/scalar.hpp"

namespace qtl {

/// Image of an L basis element in tau under the derived-algebra isomorphism.
/// Rules branch on the parity of the raw t1 exponent.
TauElem phiTau(const LElem& x);

struct NotInDomain : std::runtime_error {
    explicit NotInDomain(const std::string& what) : std::runtime_error(what) {}
};

/// Image of a degree-0 element under the affine isomorphism; defined on the
/// subalgebra spanned by t0^1 t^{j m2}, t0^0 t^{(2j+1) m2} and the central
/// direction m21 c1 + m22 c2.  Requires m21 odd; throws NotInDomain outside
/// the span.
AffElem phiAff(const LElem& x, const GradingBasis& basis);

struct HomReport {
    long checkedPairs = 0;
    std::vector<std::pair<std::string, std::string>> failures;
    std::size_t injectivityRank = 0;
    std::size_t injectivityExpected = 0;

    bool pass() const {
        return failures.empty() && injectivityRank == injectivityExpected;
    }
};

/// Checks map([x,y]) = [map x, map y] on all pairs of generator elements and
/// that the images of the generators are linearly independent (exact rank).
template <typename SKey, typename TKey>
HomReport verifyHom(const std::function<Element<TKey>(const Element<SKey>&)>& map,
                    const std::function<Element<SKey>(const Element<SKey>&, const Element<SKey>&)>&
                        bracketS,
                    const std::function<Element<TKey>(const Element<TKey>&, const Element<TKey>&)>&
                        bracketT,
                    const std::vector<Element<SKey>>& elems,
                    const std::vector<std::string>& labels) {
    HomReport rep;
    for (std::size_t a = 0; a < elems.size(); ++a)
        for (std::size_t b = 0; b < elems.size(); ++b) {
            ++rep.checkedPairs;
            Element<TKey> lhs = map(bracketS(elems[a], elems[b]));
            Element<TKey> rhs = bracketT(map(elems[a]), map(elems[b]));
            if (!(lhs == rhs)) rep.failures.emplace_back(labels[a], labels[b]);
        }
    // injectivity: images as columns over the union of their target keys
    std::map<TKey, std::size_t> rowOf;
    std::vector<Element<TKey>> images;
    for (const auto& e : elems) {
        images.push_back(map(e));
        for (const auto& [k, c] : images.back().terms) rowOf.emplace(k, 0);
    }
    std::size_t r = 0;
    for (auto& [k, idx] : rowOf) idx = r++;
    ExactField F;
    Matrix<Fq> M(rowOf.size(), images.size(), F.zero());
    for (std::size_t c = 0; c < images.size(); ++c)
        for (const auto& [k, v] : images[c].terms) M.at(rowOf[k], c) = v;
    rep.injectivityExpected = images.size();
    rep.injectivityRank = rank(F, M);
    return rep;
}

template <typename SKey, typename TKey>
HomReport verifyHom(const std::function<Element<TKey>(const Element<SKey>&)>& map,
                    const std::function<Element<SKey>(const Element<SKey>&, const Element<SKey>&)>&
                        bracketS,
                    const std::function<Element<TKey>(const Element<TKey>&, const Element<TKey>&)>&
                        bracketT,
                    const std::vector<SKey>& keys) {
    std::vector<Element<SKey>> elems;
    std::vector<std::string> labels;
    for (const auto& k : keys) {
        elems.push_back(Element<SKey>::single(k));
        labels.push_back(k.str());
    }
    return verifyHom(map, bracketS, bracketT, elems, labels);
}

/// Key box for the phiTau checks: torus indices in [-box, box]^2, both
/// parities, plus the central elements.
std::vector<LKey> lKeyBox(long box);

/// Generators of the phiAff domain with loop indices in [-box, box]: the
/// central direction, t0^1 t^{j m2}, and t0^0 t^{(2j+1) m2}.  Represented by
/// torus keys; the central direction is handled separately by callers since
/// it is not a single basis key in general.
std::vector<LKey> affDomainBox(long box, const GradingBasis& basis);

HomReport verifyPhiTau(long box);
HomReport verifyPhiAff(long box, const GradingBasis& basis);

}  // namespace qtl

#endif
