#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace ckgraph {

using json = nlohmann::json;

enum class Verdict { yes, no, unknown };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::yes: return "Yes";
        case Verdict::no: return "No";
        default: return "Unknown";
    }
}

// A three-valued answer with a finite witness.
struct Decision {
    Verdict verdict = Verdict::unknown;
    json certificate = json::object();
    std::string reason;
    std::int64_t budget_used = 0;

    bool is_yes() const { return verdict == Verdict::yes; }
    bool is_no() const { return verdict == Verdict::no; }
    bool is_unknown() const { return verdict == Verdict::unknown; }

    static Decision yes(json cert = json::object(), std::int64_t used = 0) {
        return {Verdict::yes, std::move(cert), {}, used};
    }
    static Decision no(json cert, std::int64_t used = 0) {
        return {Verdict::no, std::move(cert), {}, used};
    }
    static Decision unknown(std::string why, std::int64_t used = 0) {
        return {Verdict::unknown, json::object(), std::move(why), used};
    }

    json to_json() const {
        json j;
        j["verdict"] = to_string(verdict);
        j["certificate"] = certificate;
        j["budget_used"] = budget_used;
        if (!reason.empty()) j["reason"] = reason;
        return j;
    }
};

class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class budget_exhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ckgraph
