#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "permtest/errors.hpp"
#include "permtest/rng.hpp"

namespace permtest {

// A sample: ordered real observations.
using DataVector = std::vector<double>;

// Throws DimensionError unless the vector is non-empty and all entries finite.
void validate_data(const DataVector& x);

enum class ElementKind { permutation, sign_mask, cyclic_shift };

// One transformation of a data vector. Immutable value; equality is payload
// equality within a kind.
class GroupElement {
public:
    // One-line notation: acting gives y[i] = x[perm[i]].
    static GroupElement permutation(std::vector<std::uint32_t> one_line);
    static GroupElement sign_mask(std::vector<std::int8_t> signs);
    static GroupElement cyclic_shift(std::size_t n, std::size_t offset);
    static GroupElement identity_permutation(std::size_t n);

    ElementKind kind() const { return kind_; }
    std::size_t dimension() const;
    bool is_identity() const;

    const std::vector<std::uint32_t>& perm() const { return perm_; }
    const std::vector<std::int8_t>& signs() const { return signs_; }
    std::size_t shift_offset() const { return offset_; }

    bool operator==(const GroupElement& other) const = default;

private:
    GroupElement() = default;

    ElementKind kind_ = ElementKind::permutation;
    std::vector<std::uint32_t> perm_;
    std::vector<std::int8_t> signs_;
    std::size_t n_ = 0;
    std::size_t offset_ = 0;
};

struct GroupElementHash {
    std::size_t operator()(const GroupElement& g) const;
};

// Composition g∘h: apply h first, then g.
GroupElement compose(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);

DataVector apply(const GroupElement& g, const DataVector& x);
void apply_into(const GroupElement& g, const DataVector& x, DataVector& out);

enum class GroupFamily { full_symmetric, two_sample_relabeling, sign_flip, cyclic, explicit_list };

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

// Description of a finite transformation group.
class GroupSpec {
public:
    static GroupSpec full_symmetric(std::size_t n);
    // n cases and n controls; the symmetric group on 2n indices.
    static GroupSpec two_sample(std::size_t cases_per_arm);
    static GroupSpec sign_flip(std::size_t n);
    static GroupSpec cyclic(std::size_t n);
    static GroupSpec explicit_list(std::vector<GroupElement> elements);

    GroupFamily family() const { return family_; }
    // Dimension of the vectors the group acts on.
    std::size_t degree() const;
    // Group order, clamped at uint64 max when it overflows.
    std::uint64_t cardinality() const;
    bool cardinality_exceeds(std::uint64_t limit) const;
    const std::vector<GroupElement>& explicit_elements() const { return elements_; }

    std::string to_string() const;
    // Accepts "full-symmetric:N", "two-sample:N", "sign-flip:N", "cyclic:N".
    static GroupSpec parse(const std::string& text);

private:
    GroupSpec(GroupFamily family, std::size_t n) : family_(family), n_(n) {}

    GroupFamily family_;
    std::size_t n_ = 0;
    std::vector<GroupElement> elements_;
};

// All elements, identity first, otherwise in a fixed lexicographic order.
// Throws GroupTooLarge when the order exceeds the cap.
std::vector<GroupElement> enumerate_group(const GroupSpec& spec,
                                          std::uint64_t cap = kDefaultEnumerationCap);

// Uniform draw without enumeration (Fisher-Yates shuffle for permutations,
// independent fair bits for sign masks, uniform offset for shifts).
GroupElement sample_uniform(const GroupSpec& spec, RngEngine& rng);

struct AxiomCheckOptions {
    // Pair budget under which the composition check runs exhaustively.
    std::uint64_t max_exhaustive_pairs = 100'000'000;
    // Sampled pairs when the set is too large for the exhaustive check.
    std::uint64_t sampled_pairs = 200'000;
    std::uint64_t seed = 0;
};

struct AxiomReport {
    bool contains_identity = false;
    bool closed_under_composition = false;
    bool closed_under_inverse = false;
    std::optional<std::pair<GroupElement, GroupElement>> composition_witness;
    std::optional<GroupElement> inverse_witness;
    std::uint64_t checked_pairs = 0;
    bool exhaustive = false;

    bool is_group() const {
        return contains_identity && closed_under_composition && closed_under_inverse;
    }
};

// Checks the group axioms on an explicit element set. Failure is reported,
// not thrown; a witness is recorded for each failed flag.
AxiomReport verify_group_axioms(const std::vector<GroupElement>& elements,
                                const AxiomCheckOptions& options = {});

// All permutations of {0,...,2n-1} whose case/control relabeling exchanges
// exactly n/2 cases with n/2 controls. Not a group; generated for negative
// demonstrations only. Requires even n >= 2.
std::vector<GroupElement> balanced_permutations(std::size_t cases_per_arm,
                                                std::uint64_t cap = kDefaultEnumerationCap);

} // namespace permtest
