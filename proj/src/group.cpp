#include "permtest/group.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace permtest {

namespace {

std::uint64_t factorial_clamped(std::uint64_t n) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (__builtin_mul_overflow(r, i, &r))
            return UINT64_MAX;
    }
    return r;
}

std::uint64_t pow2_clamped(std::uint64_t n) {
    return n >= 64 ? UINT64_MAX : (std::uint64_t{1} << n);
}

void require_same_shape(const GroupElement& g, const GroupElement& h) {
    if (g.kind() != h.kind() || g.dimension() != h.dimension())
        throw InvalidComposition("group elements differ in kind or dimension");
}

} // namespace

void validate_data(const DataVector& x) {
    if (x.empty())
        throw DimensionError("data vector must contain at least one value");
    for (double v : x) {
        if (!std::isfinite(v))
            throw DimensionError("data vector entries must be finite");
    }
}

GroupElement GroupElement::permutation(std::vector<std::uint32_t> one_line) {
    if (one_line.empty())
        throw std::invalid_argument("permutation must have positive size");
    std::vector<bool> seen(one_line.size(), false);
    for (std::uint32_t v : one_line) {
        if (v >= one_line.size() || seen[v])
            throw std::invalid_argument("permutation payload is not a bijection of 0..n-1");
        seen[v] = true;
    }
    GroupElement g;
    g.kind_ = ElementKind::permutation;
    g.n_ = one_line.size();
    g.perm_ = std::move(one_line);
    return g;
}

GroupElement GroupElement::sign_mask(std::vector<std::int8_t> signs) {
    if (signs.empty())
        throw std::invalid_argument("sign mask must have positive size");
    for (std::int8_t s : signs) {
        if (s != 1 && s != -1)
            throw std::invalid_argument("sign mask entries must be +1 or -1");
    }
    GroupElement g;
    g.kind_ = ElementKind::sign_mask;
    g.n_ = signs.size();
    g.signs_ = std::move(signs);
    return g;
}

GroupElement GroupElement::cyclic_shift(std::size_t n, std::size_t offset) {
    if (n == 0)
        throw std::invalid_argument("cyclic shift must have positive size");
    if (offset >= n)
        throw std::invalid_argument("cyclic shift offset must lie in 0..n-1");
    GroupElement g;
    g.kind_ = ElementKind::cyclic_shift;
    g.n_ = n;
    g.offset_ = offset;
    return g;
}

GroupElement GroupElement::identity_permutation(std::size_t n) {
    std::vector<std::uint32_t> p(n);
    std::iota(p.begin(), p.end(), 0u);
    return permutation(std::move(p));
}

std::size_t GroupElement::dimension() const {
    return n_;
}

bool GroupElement::is_identity() const {
    switch (kind_) {
    case ElementKind::permutation:
        for (std::size_t i = 0; i < perm_.size(); ++i)
            if (perm_[i] != i)
                return false;
        return true;
    case ElementKind::sign_mask:
        return std::all_of(signs_.begin(), signs_.end(), [](std::int8_t s) { return s == 1; });
    case ElementKind::cyclic_shift:
        return offset_ == 0;
    }
    return false;
}

std::size_t GroupElementHash::operator()(const GroupElement& g) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 0x100000001b3ULL;
    };
    mix(static_cast<std::uint64_t>(g.kind()));
    mix(g.dimension());
    switch (g.kind()) {
    case ElementKind::permutation:
        for (std::uint32_t v : g.perm())
            mix(v);
        break;
    case ElementKind::sign_mask:
        for (std::int8_t s : g.signs())
            mix(static_cast<std::uint64_t>(s == 1));
        break;
    case ElementKind::cyclic_shift:
        mix(g.shift_offset());
        break;
    }
    return static_cast<std::size_t>(h);
}

GroupElement compose(const GroupElement& g, const GroupElement& h) {
    require_same_shape(g, h);
    const std::size_t n = g.dimension();
    switch (g.kind()) {
    case ElementKind::permutation: {
        // apply h then g: y[i] = x[h[g[i]]]
        std::vector<std::uint32_t> p(n);
        for (std::size_t i = 0; i < n; ++i)
            p[i] = h.perm()[g.perm()[i]];
        return GroupElement::permutation(std::move(p));
    }
    case ElementKind::sign_mask: {
        std::vector<std::int8_t> s(n);
        for (std::size_t i = 0; i < n; ++i)
            s[i] = static_cast<std::int8_t>(g.signs()[i] * h.signs()[i]);
        return GroupElement::sign_mask(std::move(s));
    }
    case ElementKind::cyclic_shift:
        return GroupElement::cyclic_shift(n, (g.shift_offset() + h.shift_offset()) % n);
    }
    throw InvalidComposition("unknown element kind");
}

GroupElement inverse(const GroupElement& g) {
    const std::size_t n = g.dimension();
    switch (g.kind()) {
    case ElementKind::permutation: {
        std::vector<std::uint32_t> q(n);
        for (std::size_t i = 0; i < n; ++i)
            q[g.perm()[i]] = static_cast<std::uint32_t>(i);
        return GroupElement::permutation(std::move(q));
    }
    case ElementKind::sign_mask:
        return g; // sign flips are involutions
    case ElementKind::cyclic_shift:
        return GroupElement::cyclic_shift(n, (n - g.shift_offset()) % n);
    }
    throw InvalidComposition("unknown element kind");
}

void apply_into(const GroupElement& g, const DataVector& x, DataVector& out) {
    const std::size_t n = g.dimension();
    if (x.size() != n)
        throw DimensionError("element dimension does not match data length");
    out.resize(n);
    switch (g.kind()) {
    case ElementKind::permutation:
        for (std::size_t i = 0; i < n; ++i)
            out[i] = x[g.perm()[i]];
        return;
    case ElementKind::sign_mask:
        for (std::size_t i = 0; i < n; ++i)
            out[i] = g.signs()[i] * x[i];
        return;
    case ElementKind::cyclic_shift: {
        const std::size_t o = g.shift_offset();
        for (std::size_t i = 0; i < n; ++i)
            out[i] = x[(i + o) % n];
        return;
    }
    }
}

DataVector apply(const GroupElement& g, const DataVector& x) {
    DataVector out;
    apply_into(g, x, out);
    return out;
}

GroupSpec GroupSpec::full_symmetric(std::size_t n) {
    if (n == 0)
        throw std::invalid_argument("group degree must be positive");
    return GroupSpec(GroupFamily::full_symmetric, n);
}

GroupSpec GroupSpec::two_sample(std::size_t cases_per_arm) {
    if (cases_per_arm == 0)
        throw std::invalid_argument("two-sample design needs at least one case per arm");
    return GroupSpec(GroupFamily::two_sample_relabeling, cases_per_arm);
}

GroupSpec GroupSpec::sign_flip(std::size_t n) {
    if (n == 0)
        throw std::invalid_argument("group degree must be positive");
    return GroupSpec(GroupFamily::sign_flip, n);
}

GroupSpec GroupSpec::cyclic(std::size_t n) {
    if (n == 0)
        throw std::invalid_argument("group degree must be positive");
    return GroupSpec(GroupFamily::cyclic, n);
}

GroupSpec GroupSpec::explicit_list(std::vector<GroupElement> elements) {
    if (elements.empty())
        throw std::invalid_argument("explicit group needs at least one element");
    const ElementKind kind = elements.front().kind();
    const std::size_t dim = elements.front().dimension();
    std::unordered_set<GroupElement, GroupElementHash> seen;
    for (const GroupElement& g : elements) {
        if (g.kind() != kind || g.dimension() != dim)
            throw InvalidComposition("explicit element list mixes kinds or dimensions");
        if (!seen.insert(g).second)
            throw std::invalid_argument("explicit element list contains duplicates");
    }
    GroupSpec spec(GroupFamily::explicit_list, dim);
    spec.elements_ = std::move(elements);
    return spec;
}

std::size_t GroupSpec::degree() const {
    switch (family_) {
    case GroupFamily::two_sample_relabeling:
        return 2 * n_;
    case GroupFamily::explicit_list:
        return elements_.front().dimension();
    default:
        return n_;
    }
}

std::uint64_t GroupSpec::cardinality() const {
    switch (family_) {
    case GroupFamily::full_symmetric:
        return factorial_clamped(n_);
    case GroupFamily::two_sample_relabeling:
        return factorial_clamped(2 * n_);
    case GroupFamily::sign_flip:
        return pow2_clamped(n_);
    case GroupFamily::cyclic:
        return n_;
    case GroupFamily::explicit_list:
        return elements_.size();
    }
    return 0;
}

bool GroupSpec::cardinality_exceeds(std::uint64_t limit) const {
    const std::uint64_t card = cardinality();
    return card == UINT64_MAX || card > limit;
}

std::string GroupSpec::to_string() const {
    std::ostringstream os;
    switch (family_) {
    case GroupFamily::full_symmetric:
        os << "full-symmetric:" << n_;
        break;
    case GroupFamily::two_sample_relabeling:
        os << "two-sample:" << n_;
        break;
    case GroupFamily::sign_flip:
        os << "sign-flip:" << n_;
        break;
    case GroupFamily::cyclic:
        os << "cyclic:" << n_;
        break;
    case GroupFamily::explicit_list:
        os << "explicit:" << elements_.size();
        break;
    }
    return os.str();
}

GroupSpec GroupSpec::parse(const std::string& text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("group spec must look like family:N, got '" + text + "'");
    const std::string family = text.substr(0, colon);
    std::size_t n = 0;
    try {
        n = static_cast<std::size_t>(std::stoull(text.substr(colon + 1)));
    } catch (const std::exception&) {
        throw std::invalid_argument("group spec has a malformed size in '" + text + "'");
    }
    if (family == "full-symmetric")
        return full_symmetric(n);
    if (family == "two-sample")
        return two_sample(n);
    if (family == "sign-flip")
        return sign_flip(n);
    if (family == "cyclic")
        return cyclic(n);
    throw std::invalid_argument("unknown group family '" + family + "'");
}

std::vector<GroupElement> enumerate_group(const GroupSpec& spec, std::uint64_t cap) {
    if (spec.cardinality_exceeds(cap))
        throw GroupTooLarge(spec.to_string() + " has more than " + std::to_string(cap) +
                            " elements; use a sampling scheme instead");
    const std::uint64_t card = spec.cardinality();
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(card));
    switch (spec.family()) {
    case GroupFamily::full_symmetric:
    case GroupFamily::two_sample_relabeling: {
        const std::size_t n = spec.degree();
        std::vector<std::uint32_t> p(n);
        std::iota(p.begin(), p.end(), 0u);
        do {
            out.push_back(GroupElement::permutation(p));
        } while (std::next_permutation(p.begin(), p.end()));
        break;
    }
    case GroupFamily::sign_flip: {
        const std::size_t n = spec.degree();
        for (std::uint64_t code = 0; code < card; ++code) {
            std::vector<std::int8_t> s(n);
            for (std::size_t j = 0; j < n; ++j) {
                const bool neg = (code >> (n - 1 - j)) & 1u;
                s[j] = neg ? -1 : 1;
            }
            out.push_back(GroupElement::sign_mask(std::move(s)));
        }
        break;
    }
    case GroupFamily::cyclic: {
        const std::size_t n = spec.degree();
        for (std::size_t o = 0; o < n; ++o)
            out.push_back(GroupElement::cyclic_shift(n, o));
        break;
    }
    case GroupFamily::explicit_list:
        out = spec.explicit_elements();
        break;
    }
    return out;
}

GroupElement sample_uniform(const GroupSpec& spec, RngEngine& rng) {
    switch (spec.family()) {
    case GroupFamily::full_symmetric:
    case GroupFamily::two_sample_relabeling: {
        const std::size_t n = spec.degree();
        std::vector<std::uint32_t> p(n);
        std::iota(p.begin(), p.end(), 0u);
        for (std::size_t i = n - 1; i > 0; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_index(rng, i + 1));
            std::swap(p[i], p[j]);
        }
        return GroupElement::permutation(std::move(p));
    }
    case GroupFamily::sign_flip: {
        const std::size_t n = spec.degree();
        std::vector<std::int8_t> s(n);
        for (std::size_t i = 0; i < n; ++i)
            s[i] = uniform_index(rng, 2) ? -1 : 1;
        return GroupElement::sign_mask(std::move(s));
    }
    case GroupFamily::cyclic: {
        const std::size_t n = spec.degree();
        return GroupElement::cyclic_shift(n, static_cast<std::size_t>(uniform_index(rng, n)));
    }
    case GroupFamily::explicit_list: {
        const auto& elems = spec.explicit_elements();
        return elems[static_cast<std::size_t>(uniform_index(rng, elems.size()))];
    }
    }
    throw std::invalid_argument("unknown group family");
}

AxiomReport verify_group_axioms(const std::vector<GroupElement>& elements,
                                const AxiomCheckOptions& options) {
    if (elements.empty())
        throw std::invalid_argument("axiom check needs at least one element");
    const ElementKind kind = elements.front().kind();
    const std::size_t dim = elements.front().dimension();
    for (const GroupElement& g : elements) {
        if (g.kind() != kind || g.dimension() != dim)
            throw InvalidComposition("axiom check needs elements of one kind and dimension");
    }

    std::unordered_set<GroupElement, GroupElementHash> set(elements.begin(), elements.end());
    AxiomReport report;

    report.contains_identity =
        std::any_of(elements.begin(), elements.end(), [](const GroupElement& g) {
            return g.is_identity();
        });

    report.closed_under_inverse = true;
    for (const GroupElement& g : elements) {
        if (!set.contains(inverse(g))) {
            report.closed_under_inverse = false;
            report.inverse_witness = g;
            break;
        }
    }

    const std::uint64_t count = elements.size();
    report.closed_under_composition = true;
    if (count * count <= options.max_exhaustive_pairs) {
        report.exhaustive = true;
        for (const GroupElement& g : elements) {
            for (const GroupElement& h : elements) {
                ++report.checked_pairs;
                if (!set.contains(compose(g, h))) {
                    report.closed_under_composition = false;
                    report.composition_witness = {g, h};
                    return report;
                }
            }
        }
    } else {
        report.exhaustive = false;
        RngEngine rng(mix_seed(options.seed));
        for (std::uint64_t k = 0; k < options.sampled_pairs; ++k) {
            const GroupElement& g = elements[static_cast<std::size_t>(uniform_index(rng, count))];
            const GroupElement& h = elements[static_cast<std::size_t>(uniform_index(rng, count))];
            ++report.checked_pairs;
            if (!set.contains(compose(g, h))) {
                report.closed_under_composition = false;
                report.composition_witness = {g, h};
                return report;
            }
        }
    }
    return report;
}

std::vector<GroupElement> balanced_permutations(std::size_t cases_per_arm, std::uint64_t cap) {
    const std::size_t n = cases_per_arm;
    if (n < 2 || n % 2 != 0)
        throw UnsupportedDesign("balanced relabelings need an even arm size of at least 2");
    const std::size_t total = 2 * n;
    if (factorial_clamped(total) == UINT64_MAX || factorial_clamped(total) > cap)
        throw GroupTooLarge("balanced relabelings for arm size " + std::to_string(n) +
                            " would require enumerating more than " + std::to_string(cap) +
                            " permutations");
    const std::size_t crossings = n / 2;
    std::vector<GroupElement> out;
    std::vector<std::uint32_t> p(total);
    std::iota(p.begin(), p.end(), 0u);
    do {
        std::size_t moved = 0;
        for (std::size_t j = 0; j < n; ++j)
            moved += p[j] >= n;
        if (moved == crossings)
            out.push_back(GroupElement::permutation(p));
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

} // namespace permtest
