#include "permtest/report_json.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace permtest {

ordered_json to_json(const GroupElement& g) {
    switch (g.kind()) {
    case ElementKind::permutation:
        return ordered_json(g.perm());
    case ElementKind::sign_mask: {
        std::vector<int> s(g.signs().begin(), g.signs().end());
        return ordered_json(s);
    }
    case ElementKind::cyclic_shift:
        return ordered_json{{"cyclic", g.dimension()}, {"offset", g.shift_offset()}};
    }
    throw std::invalid_argument("unknown element kind");
}

GroupElement element_from_json(const ordered_json& j) {
    if (j.is_object()) {
        if (!j.contains("cyclic") || !j.contains("offset"))
            throw std::invalid_argument("element object must carry 'cyclic' and 'offset'");
        return GroupElement::cyclic_shift(j.at("cyclic").get<std::size_t>(),
                                          j.at("offset").get<std::size_t>());
    }
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("element must be a non-empty array");
    std::vector<long long> raw = j.get<std::vector<long long>>();

    // A valid one-line permutation wins; otherwise +/-1 entries mean a sign
    // mask. The encodings are disjoint: sign masks never contain a 0 and
    // permutations of size >= 2 always do.
    std::vector<bool> seen(raw.size(), false);
    bool is_perm = true;
    for (long long v : raw) {
        if (v < 0 || v >= static_cast<long long>(raw.size()) || seen[static_cast<std::size_t>(v)]) {
            is_perm = false;
            break;
        }
        seen[static_cast<std::size_t>(v)] = true;
    }
    if (is_perm) {
        std::vector<std::uint32_t> p(raw.begin(), raw.end());
        return GroupElement::permutation(std::move(p));
    }
    std::vector<std::int8_t> s;
    s.reserve(raw.size());
    for (long long v : raw) {
        if (v != 1 && v != -1)
            throw std::invalid_argument(
                "element array is neither a permutation nor a +/-1 sign mask");
        s.push_back(static_cast<std::int8_t>(v));
    }
    return GroupElement::sign_mask(std::move(s));
}

std::vector<GroupElement> elements_from_json(const ordered_json& j) {
    const ordered_json* list = &j;
    if (j.is_object()) {
        if (!j.contains("elements"))
            throw std::invalid_argument("transforms object must carry 'elements'");
        list = &j.at("elements");
    }
    if (!list->is_array() || list->empty())
        throw std::invalid_argument("transforms must be a non-empty array");
    std::vector<GroupElement> out;
    out.reserve(list->size());
    for (const auto& ej : *list)
        out.push_back(element_from_json(ej));
    const ElementKind kind = out.front().kind();
    const std::size_t dim = out.front().dimension();
    for (const GroupElement& g : out)
        if (g.kind() != kind || g.dimension() != dim)
            throw std::invalid_argument("transforms mix kinds or dimensions");
    return out;
}

std::vector<GroupElement> elements_from_json_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("malformed transforms JSON: ") + e.what());
    }
    return elements_from_json(j);
}

std::vector<GroupElement> elements_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open transforms file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return elements_from_json_text(buf.str());
}

std::string to_string(Decision d) {
    switch (d) {
    case Decision::reject:
        return "reject";
    case Decision::retain:
        return "retain";
    case Decision::reject_with_probability:
        return "reject-with-probability";
    }
    return "unknown";
}

ordered_json to_json(const TestReport& r) {
    ordered_json j;
    j["schema"] = "permtest/1";
    j["kind"] = "test-report";
    j["decision"] = to_string(r.decision);
    j["rejected"] = r.rejected;
    j["alpha"] = r.alpha;
    j["statistic"] = r.statistic;
    j["threshold_index"] = r.threshold_index;
    j["threshold_value"] = r.threshold_value;
    ordered_json counts = ordered_json::object();
    if (r.counts.m_plus)
        counts["M_plus"] = *r.counts.m_plus;
    if (r.counts.m_zero)
        counts["M_zero"] = *r.counts.m_zero;
    if (r.counts.d)
        counts["D"] = *r.counts.d;
    if (r.counts.b)
        counts["B"] = *r.counts.b;
    j["counts"] = counts;
    if (r.p_value)
        j["p_value"] = *r.p_value;
    if (r.boundary_probability)
        j["boundary_probability"] = *r.boundary_probability;
    if (r.u)
        j["u"] = *r.u;
    if (r.seed)
        j["seed"] = *r.seed;
    if (r.group_size)
        j["group_size"] = *r.group_size;
    if (r.w)
        j["w"] = *r.w;
    if (r.k_prime)
        j["k_prime"] = *r.k_prime;
    if (r.plan) {
        j["plan"] = ordered_json{{"mode", r.plan->mode},
                                 {"w", r.plan->w},
                                 {"include_identity", r.plan->include_identity}};
    }
    if (!r.draws.empty()) {
        ordered_json draws = ordered_json::array();
        for (const GroupElement& g : r.draws)
            draws.push_back(to_json(g));
        j["draws"] = draws;
    }
    return j;
}

ordered_json to_json(const AxiomReport& r) {
    ordered_json j;
    j["schema"] = "permtest/1";
    j["kind"] = "axiom-report";
    j["contains_identity"] = r.contains_identity;
    j["closed_under_composition"] = r.closed_under_composition;
    j["closed_under_inverse"] = r.closed_under_inverse;
    j["is_group"] = r.is_group();
    j["checked_pairs"] = r.checked_pairs;
    j["exhaustive"] = r.exhaustive;
    if (r.composition_witness) {
        j["composition_witness"] =
            ordered_json::array({to_json(r.composition_witness->first),
                                 to_json(r.composition_witness->second)});
    }
    if (r.inverse_witness)
        j["inverse_witness"] = to_json(*r.inverse_witness);
    return j;
}

ordered_json to_json(const SimulationConfig& c) {
    ordered_json j;
    j["experiment"] = to_string(c.experiment);
    j["replications"] = c.replications;
    j["master_seed"] = c.master_seed;
    ordered_json null_j;
    null_j["kind"] = c.null_model.kind == NullModelKind::normal ? "normal" : "binary";
    null_j["dim"] = c.null_model.dim;
    if (c.null_model.kind == NullModelKind::binary)
        null_j["prob"] = c.null_model.prob;
    j["null"] = null_j;
    ordered_json test_j;
    test_j["operation"] = to_string(c.test.operation);
    test_j["stat"] = c.test.stat.to_string();
    if (c.test.group)
        test_j["group"] = c.test.group->to_string();
    test_j["alpha"] = c.test.alpha;
    ordered_json plan_j;
    plan_j["mode"] = to_string(c.test.plan.mode);
    plan_j["w"] = c.test.plan.w;
    plan_j["include_identity"] = c.test.plan.include_identity;
    test_j["plan"] = plan_j;
    if (!c.test.plan.subset.empty()) {
        ordered_json subset = ordered_json::array();
        for (const GroupElement& g : c.test.plan.subset)
            subset.push_back(to_json(g));
        test_j["transforms"] = subset;
    }
    if (c.test.allow_naive)
        test_j["allow_naive"] = true;
    if (c.test.tie_tolerance != 0.0)
        test_j["tie_tolerance"] = c.test.tie_tolerance;
    j["test"] = test_j;
    if (c.experiment == ExperimentKind::pvalue_uniformity)
        j["pvalue"] = to_string(c.pvalue_kind);
    if (!c.cutoffs.empty())
        j["cutoffs"] = c.cutoffs;
    if (c.experiment == ExperimentKind::balanced_demo)
        j["balanced"] = ordered_json{{"per_arm", c.balanced_per_arm}};
    if (c.experiment == ExperimentKind::bonferroni_demo)
        j["bonferroni"] =
            ordered_json{{"hypotheses", c.hypotheses}, {"cutoff", c.per_test_cutoff}};
    if (c.shift != 0.0)
        j["shift"] = c.shift;
    return j;
}

ordered_json to_json(const SimulationReport& r) {
    ordered_json j;
    j["schema"] = "permtest/1";
    j["kind"] = "simulation-report";
    j["experiment"] = to_string(r.experiment);
    j["replications"] = r.replications;
    if (r.rejection_rate)
        j["rejection_rate"] = *r.rejection_rate;
    if (r.standard_error)
        j["standard_error"] = *r.standard_error;
    if (!r.exceedance.empty()) {
        ordered_json table = ordered_json::array();
        for (const CutoffRate& row : r.exceedance)
            table.push_back(ordered_json{{"cutoff", row.cutoff},
                                         {"rate", row.rate},
                                         {"standard_error", row.standard_error}});
        j["exceedance"] = table;
    }
    if (r.ks_distance)
        j["ks_distance"] = *r.ks_distance;
    if (r.balanced_rate)
        j["balanced_rate"] = *r.balanced_rate;
    if (r.balanced_standard_error)
        j["balanced_standard_error"] = *r.balanced_standard_error;
    if (r.control_rate)
        j["control_rate"] = *r.control_rate;
    if (r.control_standard_error)
        j["control_standard_error"] = *r.control_standard_error;
    if (r.group_axioms_pass)
        j["group_axioms_pass"] = *r.group_axioms_pass;
    if (r.fwer_naive)
        j["fwer_naive"] = *r.fwer_naive;
    if (r.fwer_naive_standard_error)
        j["fwer_naive_standard_error"] = *r.fwer_naive_standard_error;
    if (r.fwer_tilde)
        j["fwer_tilde"] = *r.fwer_tilde;
    if (r.fwer_tilde_standard_error)
        j["fwer_tilde_standard_error"] = *r.fwer_tilde_standard_error;
    j["config"] = to_json(r.config);
    return j;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
    std::ostringstream os;
    os << "replication,p_value,decision\n";
    for (const TraceRow& row : trace) {
        os << row.replication << ',';
        if (std::isnan(row.p_value))
            os << "";
        else
            os << ordered_json(row.p_value).dump();
        os << ',' << (row.rejected ? 1 : 0) << '\n';
    }
    return os.str();
}

} // namespace permtest
