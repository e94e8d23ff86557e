#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "ckgraph/paths.hpp"
#include "ckgraph/staged.hpp"
#include "ckgraph/staged_analysis.hpp"

namespace ckgraph {

// (x, n, y) with x ~_n y; x and y are kept in normal form
struct GroupoidElement {
    Path x;
    std::int64_t lag = 0;
    Path y;

    friend bool operator==(const GroupoidElement&, const GroupoidElement&) = default;
};

// throws input_error unless x ~_n y
GroupoidElement make_element(const Graph& g, const Path& x, std::int64_t n, const Path& y);
GroupoidElement unit(const Graph& g, const Path& x);
GroupoidElement range_unit(const GroupoidElement& a);
GroupoidElement source_unit(const GroupoidElement& a);
bool composable(const GroupoidElement& a, const GroupoidElement& b);
// throws input_error when s(a) != r(b)
GroupoidElement compose(const GroupoidElement& a, const GroupoidElement& b);
GroupoidElement inverse(const GroupoidElement& a);
json element_json(const Graph& g, const GroupoidElement& a);

// Z(alpha, beta) for finite alpha, beta
struct BasisSet {
    Path alpha;
    Path beta;
};

bool basis_member(const Graph& g, const GroupoidElement& a, const BasisSet& z);
json basis_json(const Graph& g, const BasisSet& z);

// Least M >= max(0, n) with sigma^M(x) = sigma^{M-n}(y); every Z(alpha, beta)
// containing the element has |alpha| >= M.
std::int64_t divergence_depth(const Graph& g, const GroupoidElement& a);

// number of y in alpha E^{<=inf} with y ~ x
ClassCount count_shift_class_in_cylinder(const StagedAnalyzer& an, const Path& x, const Path& alpha);
ClassCount count_shift_class_in_cylinder(const Graph& g, const Path& x, const Path& alpha,
                                         std::int64_t budget = 1 << 16);

using WitnessFormula = std::function<GroupoidElement(std::int64_t n)>;

struct FamilyLimit {
    std::string name;
    Path z;
    std::vector<std::string> witness_names;
    std::vector<WitnessFormula> witnesses;
};

// Declared, not checked: c(m, n) is p-periodic in n once n >= m + settle.
struct CountContract {
    bool declared = false;
    std::int64_t period = 1;
    std::int64_t settle = 1;
};

struct SequenceFamily {
    std::string name;
    std::shared_ptr<const StagedGraph> graph;
    std::function<Path(std::int64_t n)> member;
    std::int64_t first_index = 1;
    std::vector<FamilyLimit> limits;
    CountContract contract;
    // witnesses are affine in n, so observed monotone growth persists
    bool closed_form_witnesses = false;
    bool locally_closed_orbit = false;

    const FamilyLimit& limit(const std::string& name) const;  // empty name: first limit
};

std::vector<std::string> sequence_family_names();
// "2times", "ktimes:<k>", "ml2mu3", "nonhausdorff", with an optional "thesis:" prefix
SequenceFamily sequence_family(const std::string& name);

using Ratio = boost::rational<std::int64_t>;

struct ProfileOptions {
    std::int64_t cylinders = 8;  // depths 0 .. cylinders - 1
    std::int64_t window = 64;    // indices first .. first + window - 1
    std::int64_t budget = 1 << 16;
};

struct MultiplicityProfile {
    std::string family, limit;
    std::vector<std::int64_t> depths, indices;
    std::vector<std::vector<ClassCount>> table;  // [depth][index]
    std::vector<ClassCount> lambda_z;
    std::optional<Ratio> lower, upper;
    std::string status;  // Certified, Empirical or Unknown
    json notes = json::array();

    bool certified() const { return status == "Certified"; }
    json to_json() const;
};

MultiplicityProfile multiplicity_profile(const SequenceFamily& f, const std::string& limit = "",
                                         const ProfileOptions& opt = {});

struct ConditionVerdict {
    std::string condition;
    bool passed = false;
    std::string status;  // Certified or Empirical
    json detail = json::object();
};

struct WitnessReport {
    std::string family, limit;
    std::vector<ConditionVerdict> conditions;

    bool passed() const;
    bool certified() const;
    json to_json() const;
};

struct WitnessOptions {
    std::int64_t cylinders = 6;
    std::int64_t window = 32;
};

// diagonal cylinders Z(z(0,m), z(0,m)) and the smallest basis set around
// each early product gamma^(j) (gamma^(i))^-1
std::vector<BasisSet> default_escape_cover(const SequenceFamily& f, const FamilyLimit& lim,
                                           const std::vector<WitnessFormula>& gammas, const WitnessOptions& opt);

WitnessReport k_times_witness_check(const SequenceFamily& f, const FamilyLimit& lim,
                                    const std::vector<WitnessFormula>& gammas, const WitnessOptions& opt = {},
                                    std::vector<BasisSet> cover = {});

}  // namespace ckgraph
