#pragma once

// The engine ties fields, Gauss tables, and counts together with memoization,
// the optional disk caches, and the precision policy: the fast certified
// double-double backend runs first; if its error budget cannot certify the
// rounding, the computation escalates to MPFR at the configured precision
// (default 64 + 2*ceil(log2 q^{n+2})).

#include <cmath>
#include <map>

#include "mirrorcount/cache.hpp"
#include "mirrorcount/formula.hpp"

namespace mc {

inline int default_mpfr_bits(u64 q, u32 n) {
    double lg = (double)(n + 2) * std::log2((double)q);
    return 64 + 2 * (int)std::ceil(lg);
}

inline u64 mult_order_mod(u64 q, u64 modulus) {
    if (modulus <= 1 || gcd_u64(q % modulus, modulus) != 1)
        throw usage_error("multiplicative order undefined: gcd(q, " + std::to_string(modulus) +
                          ") != 1");
    u64 t = q % modulus, k = 1;
    while (t != 1) { t = t * (q % modulus) % modulus; ++k; }
    return k;
}

class Engine {
  public:
    CountCache cache;
    bool verify_cache = false;
    int forced_precision = 0; // 0 = auto; otherwise MPFR bits (<= 106 selects dd)

    void open_cache(const std::string& dir) { cache.open(dir); }

    FieldPtr field(u64 p, u32 m) {
        auto key = std::make_pair(p, m);
        auto it = fields_.find(key);
        if (it != fields_.end()) return it->second;
        auto F = Field::make(p, m);
        fields_[key] = F;
        return F;
    }

    const GaussTable<dd>& gauss_dd(const FieldPtr& F) {
        auto key = std::make_pair(F->p, F->m);
        auto it = gauss_.find(key);
        if (it != gauss_.end()) return *it->second;
        auto gt = std::make_shared<GaussTable<dd>>();
        bool loaded = false;
        if (cache.enabled() && F->q <= (1u << 20)) {
            loaded = load_gauss_table(*gt, F, gauss_cache_path(cache.dir(), F->p, F->m));
        }
        if (!loaded) {
            *gt = build_gauss_table<dd>(F, GaussMode::dft);
            if (cache.enabled() && F->q <= (1u << 20))
                save_gauss_table(*gt, gauss_cache_path(cache.dir(), F->p, F->m));
        }
        gauss_[key] = gt;
        return *gt;
    }

    // formula-method counts with cache and precision escalation
    CountRecord counts_formula(u32 n, const FieldPtr& F, fe lambda) {
        std::string lk = lambda_key_of(*F, lambda);
        std::string key = CountCache::key(F->p, F->m, n, lk, "gauss_formula");
        auto hit = cache.enabled() ? cache.get(key) : std::nullopt;
        if (hit && !verify_cache) return *hit;

        CountRecord rec = compute_formula(n, F, lambda);
        if (hit) {
            if (count_record_to_json(*hit).dump() != count_record_to_json(rec).dump())
                throw math_error("cache verification failed for " + key);
        } else if (cache.enabled()) {
            cache.put(key, rec);
        }
        return rec;
    }

    CountRecord counts_direct(u32 n, const FieldPtr& F, fe lambda) {
        std::string lk = lambda_key_of(*F, lambda);
        std::string key = CountCache::key(F->p, F->m, n, lk, "direct");
        auto hit = cache.enabled() ? cache.get(key) : std::nullopt;
        if (hit && !verify_cache) return *hit;

        DworkInstance inst = DworkInstance::from_lambda(n, F, lambda);
        CountRecord rec;
        rec.p = F->p;
        rec.m = F->m;
        rec.n = n;
        rec.lambda_key = lk;
        rec.method = "direct";
        rec.count_X = count_X_direct(inst);
        rec.count_Nstar = count_Nstar_direct(inst);
        rec.count_Y = count_Y_from_Nstar(n, *F, rec.count_Nstar);
        rec.err_budget_used = 0.0;
        if (hit) {
            if (count_record_to_json(*hit).dump() != count_record_to_json(rec).dump())
                throw math_error("cache verification failed for " + key);
        } else if (cache.enabled()) {
            cache.put(key, rec);
        }
        return rec;
    }

  private:
    std::map<std::pair<u64, u32>, FieldPtr> fields_;
    std::map<std::pair<u64, u32>, std::shared_ptr<GaussTable<dd>>> gauss_;

    CountRecord compute_formula(u32 n, const FieldPtr& F, fe lambda) {
        DworkInstance inst = DworkInstance::from_lambda(n, F, lambda);
        CountRecord rec;
        rec.p = F->p;
        rec.m = F->m;
        rec.n = n;
        rec.lambda_key = lambda_key_of(*F, lambda);
        rec.method = "gauss_formula";

        bool use_dd = forced_precision == 0 || forced_precision <= 106;
        if (use_dd) {
            try {
                auto fc = formula_counts(inst, gauss_dd(F));
                rec.count_X = fc.x;
                rec.count_Nstar = fc.nstar;
                rec.count_Y = fc.y;
                rec.err_budget_used = fc.err_used;
                return rec;
            } catch (const math_error& e) {
                if (forced_precision != 0) throw;
                if (std::string(e.what()).find("PrecisionBudgetExceeded") == std::string::npos)
                    throw;
                // fall through to the high-precision backend
            }
        }
        int bits = forced_precision > 106 ? forced_precision : default_mpfr_bits(F->q, n);
        MpReal::default_prec() = bits;
        auto gt = build_gauss_table<MpReal>(F, GaussMode::dft);
        auto fc = formula_counts(inst, gt);
        rec.count_X = fc.x;
        rec.count_Nstar = fc.nstar;
        rec.count_Y = fc.y;
        rec.err_budget_used = fc.err_used;
        return rec;
    }
};

} // namespace mc
