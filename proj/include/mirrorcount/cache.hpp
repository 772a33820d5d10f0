#pragma once

// JSON count cache: one file per cache directory, atomic replacement on
// flush, single writer.  Cached records must byte-equal recomputation; the
// --verify-cache mode enforces this.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>

#include <json.hpp>

#include "mirrorcount/counting.hpp"
#include "mirrorcount/version.hpp"

namespace mc {

using ojson = nlohmann::ordered_json;

inline ojson count_record_to_json(const CountRecord& r) {
    ojson j;
    j["p"] = r.p;
    j["m"] = r.m;
    j["n"] = r.n;
    j["lambda"] = r.lambda_key;
    j["count_X"] = r.count_X.get_str();
    j["count_Y"] = r.count_Y.get_str();
    j["count_Nstar"] = r.count_Nstar.get_str();
    j["method"] = r.method;
    j["err_budget_used"] = r.err_budget_used;
    return j;
}

inline CountRecord count_record_from_json(const ojson& j) {
    CountRecord r;
    r.p = j.at("p").get<u64>();
    r.m = j.at("m").get<u32>();
    r.n = j.at("n").get<u32>();
    r.lambda_key = j.at("lambda").get<std::string>();
    r.count_X = mpz_class(j.at("count_X").get<std::string>());
    r.count_Y = mpz_class(j.at("count_Y").get<std::string>());
    r.count_Nstar = mpz_class(j.at("count_Nstar").get<std::string>());
    r.method = j.at("method").get<std::string>();
    r.err_budget_used = j.at("err_budget_used").get<double>();
    return r;
}

class CountCache {
    std::string dir_;
    std::map<std::string, ojson> entries_;
    bool dirty_ = false;
    std::mutex mu_;

    std::string file() const { return dir_ + "/counts.json"; }

  public:
    void open(const std::string& dir) {
        dir_ = dir;
        if (dir_.empty()) return;
        std::filesystem::create_directories(dir_);
        std::ifstream in(file());
        if (in) {
            ojson j = ojson::parse(in, nullptr, false);
            if (!j.is_discarded() && j.contains("entries"))
                for (auto& [k, v] : j.at("entries").items()) entries_[k] = v;
        }
    }
    bool enabled() const { return !dir_.empty(); }
    const std::string& dir() const { return dir_; }

    static std::string key(u64 p, u32 m, u32 n, const std::string& lambda_key,
                           const std::string& method) {
        return "p" + std::to_string(p) + ".m" + std::to_string(m) + ".n" + std::to_string(n) +
               ".lam_" + lambda_key + "." + method;
    }

    std::optional<CountRecord> get(const std::string& k) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = entries_.find(k);
        if (it == entries_.end()) return std::nullopt;
        return count_record_from_json(it->second.at("value"));
    }

    void put(const std::string& k, const CountRecord& rec) {
        std::lock_guard<std::mutex> lock(mu_);
        ojson e;
        e["value"] = count_record_to_json(rec);
        e["engine_version"] = kEngineVersion;
        e["created_at"] = 0; // reserved; kept stable so cache files diff cleanly
        entries_[k] = e;
        dirty_ = true;
    }

    void flush() {
        std::lock_guard<std::mutex> lock(mu_);
        if (dir_.empty() || !dirty_) return;
        ojson j;
        j["format"] = "mirrorcount-count-cache";
        j["version"] = 1;
        ojson ent = ojson::object();
        for (auto& [k, v] : entries_) ent[k] = v;
        j["entries"] = ent;
        std::string tmp = file() + ".tmp";
        {
            std::ofstream out(tmp);
            out << j.dump(2) << "\n";
        }
        std::filesystem::rename(tmp, file());
        dirty_ = false;
    }

    ~CountCache() {
        try { flush(); } catch (...) {}
    }
};

} // namespace mc
