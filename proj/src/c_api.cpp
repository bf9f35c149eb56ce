#include "lrlab.h"

#include <cstring>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "lrlab/errors.hpp"
#include "lrlab/experiment.hpp"
#include "lrlab/locality.hpp"
#include "lrlab/numerics.hpp"
#include "lrlab/propagation.hpp"
#include "lrlab/reports.hpp"

struct lrlab_config {
    lrlab::ExperimentConfig value;
};

struct lrlab_hamiltonian {
    lrlab::TimeDependentHamiltonian value;
};

struct lrlab_certificate {
    lrlab::LocalityCertificate value;
};

struct lrlab_audit {
    lrlab::AuditReport value;
};

struct lrlab_spread {
    lrlab::SpreadReport report;
    lrlab::SpreadAudit audit;
    lrlab::LocalityCertificate certificate;
};

namespace {

thread_local std::string g_last_error;

lrlab_status fail(lrlab_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

template <class F>
lrlab_status guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return LRLAB_OK;
    } catch (const lrlab::ValidationError& e) {
        return fail(LRLAB_ERR_VALIDATION, e.what());
    } catch (const lrlab::DomainError& e) {
        return fail(LRLAB_ERR_VALIDATION, e.what());
    } catch (const lrlab::NumericalError& e) {
        return fail(LRLAB_ERR_NUMERICAL, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(LRLAB_ERR_VALIDATION, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(LRLAB_ERR_IO, e.what());
    } catch (const lrlab::Error& e) {
        return fail(LRLAB_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(LRLAB_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(LRLAB_ERR_INTERNAL, "unknown exception");
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw lrlab::ValidationError(what);
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

lrlab::Matrix read_matrix(const double* re_im, std::size_t n) {
    require(re_im != nullptr, "matrix buffer is null");
    require(n > 0, "matrix dimension must be positive");
    lrlab::Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const std::size_t k = 2 * (r * n + c);
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {re_im[k], re_im[k + 1]};
        }
    return m;
}

lrlab::Block read_block(const size_t* labels, std::size_t count) {
    require(labels != nullptr && count > 0, "support must hold at least one label");
    return lrlab::Block(std::vector<lrlab::Label>(labels, labels + count));
}

double resolve_t_final(const lrlab::TimeDependentHamiltonian& h, double t_final, double a_probe) {
    if (t_final > 0.0) return t_final;
    if (auto T = h.total_time()) return *T;
    require(a_probe > 0.0, "cannot choose t_final for a Hamiltonian with zero a_mu");
    return 5.0 / a_probe;
}

// For constant H, a_mu does not depend on t, so a two-point grid suffices to
// pick the horizon.
double probe_a(const lrlab::TimeDependentHamiltonian& h, double mu) {
    if (!h.is_constant()) return 0.0;
    return lrlab::certify(h, mu, lrlab::TimeGrid::uniform(1.0, 2), lrlab::Permutation::identity(h.dimension()))
        .a_mu_max;
}

}  // namespace

extern "C" {

const char* lrlab_version(void) { return "0.1.0"; }

const char* lrlab_last_error(void) { return g_last_error.c_str(); }

void lrlab_string_free(char* s) { delete[] s; }

lrlab_status lrlab_config_default(lrlab_config** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = new lrlab_config{};
    });
}

lrlab_status lrlab_config_parse(const char* json_text, lrlab_config** out) {
    return guarded([&] {
        require(json_text != nullptr && out != nullptr, "null argument");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(json_text);
        } catch (const nlohmann::json::exception& e) {
            throw lrlab::ValidationError(std::string("config is not valid JSON: ") + e.what());
        }
        *out = new lrlab_config{lrlab::parse_config(j)};
    });
}

lrlab_status lrlab_config_load(const char* path, lrlab_config** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        *out = new lrlab_config{lrlab::load_config(path)};
    });
}

void lrlab_config_free(lrlab_config* c) { delete c; }

lrlab_status lrlab_config_set_double(lrlab_config* c, const char* key, double value) {
    return guarded([&] {
        require(c != nullptr && key != nullptr, "null argument");
        const std::string k = key;
        auto v = c->value;
        if (k == "threshold") {
            v.threshold = value;
        } else if (k == "mu") {
            v.mu = value;
        } else if (k == "integrator_tol") {
            v.integrator_tol = value;
        } else {
            throw lrlab::ValidationError("unknown config key '" + k + "'");
        }
        v.validate();
        c->value = std::move(v);
    });
}

lrlab_status lrlab_config_set_int(lrlab_config* c, const char* key, int64_t value) {
    return guarded([&] {
        require(c != nullptr && key != nullptr, "null argument");
        const std::string k = key;
        auto v = c->value;
        if (k == "grid_points") {
            require(value > 0, "grid_points must be positive");
            v.grid_points = static_cast<std::size_t>(value);
        } else if (k == "seed") {
            require(value >= 0, "seed must be non-negative");
            v.seed = static_cast<std::uint64_t>(value);
            v.hamiltonian.exp_local.seed = static_cast<std::uint64_t>(value);
        } else if (k == "optimize") {
            v.optimize_mu = value != 0;
        } else if (k == "fixed_basis") {
            v.fixed_basis = value != 0;
        } else {
            throw lrlab::ValidationError("unknown config key '" + k + "'");
        }
        v.validate();
        c->value = std::move(v);
    });
}

lrlab_status lrlab_config_set_string(lrlab_config* c, const char* key, const char* value) {
    return guarded([&] {
        require(c != nullptr && key != nullptr && value != nullptr, "null argument");
        if (std::string(key) != "output_dir") throw lrlab::ValidationError(std::string("unknown config key '") + key + "'");
        c->value.output_dir = value;
    });
}

lrlab_status lrlab_config_set_t_values(lrlab_config* c, const double* values, size_t count) {
    return guarded([&] {
        require(c != nullptr && (values != nullptr || count == 0), "null argument");
        auto v = c->value;
        v.t_values.assign(values, values + count);
        v.validate();
        c->value = std::move(v);
    });
}

lrlab_status lrlab_config_t_values(const lrlab_config* c, const double** values, size_t* count) {
    return guarded([&] {
        require(c != nullptr && values != nullptr && count != nullptr, "null argument");
        *values = c->value.t_values.data();
        *count = c->value.t_values.size();
    });
}

lrlab_status lrlab_hamiltonian_create(const lrlab_config* c, double total_time, lrlab_hamiltonian** out) {
    return guarded([&] {
        require(c != nullptr && out != nullptr, "null argument");
        *out = new lrlab_hamiltonian{c->value.hamiltonian.build(total_time)};
    });
}

lrlab_status lrlab_hamiltonian_constant(const double* re_im, size_t n, lrlab_hamiltonian** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = new lrlab_hamiltonian{lrlab::TimeDependentHamiltonian::constant(read_matrix(re_im, n))};
    });
}

lrlab_status lrlab_hamiltonian_linear(const double* h_i, const double* h_f, size_t n, double total_time,
                                      lrlab_hamiltonian** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = new lrlab_hamiltonian{
            lrlab::TimeDependentHamiltonian::linear(read_matrix(h_i, n), read_matrix(h_f, n), total_time)};
    });
}

void lrlab_hamiltonian_free(lrlab_hamiltonian* h) { delete h; }

lrlab_status lrlab_hamiltonian_dimension(const lrlab_hamiltonian* h, size_t* out) {
    return guarded([&] {
        require(h != nullptr && out != nullptr, "null argument");
        *out = h->value.dimension();
    });
}

lrlab_status lrlab_hamiltonian_total_time(const lrlab_hamiltonian* h, double* out) {
    return guarded([&] {
        require(h != nullptr && out != nullptr, "null argument");
        *out = h->value.total_time().value_or(0.0);
    });
}

lrlab_status lrlab_hamiltonian_evaluate(const lrlab_hamiltonian* h, double t, double* buffer, size_t capacity) {
    return guarded([&] {
        require(h != nullptr && buffer != nullptr, "null argument");
        const auto n = h->value.dimension();
        require(capacity >= 2 * n * n, "buffer too small");
        const lrlab::Matrix m = h->value.evaluate(t);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t col = 0; col < n; ++col) {
                const auto z = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col));
                buffer[2 * (r * n + col)] = z.real();
                buffer[2 * (r * n + col) + 1] = z.imag();
            }
    });
}

lrlab_status lrlab_decompose(const lrlab_hamiltonian* h, double t, double mu, char** json_out) {
    return guarded([&] {
        require(h != nullptr && json_out != nullptr, "null argument");
        const auto d = lrlab::pairwise_decompose(h->value.evaluate(t));
        auto j = lrlab::decomposition_stats(d, mu);
        j["t"] = t;
        *json_out = dup_string(j.dump(2));
    });
}

lrlab_status lrlab_certify(const lrlab_hamiltonian* h, double mu, double t_final, size_t grid_points,
                           lrlab_certificate** out) {
    return guarded([&] {
        require(h != nullptr && out != nullptr, "null argument");
        const double tf = resolve_t_final(h->value, t_final, t_final > 0.0 ? 0.0 : probe_a(h->value, mu));
        const auto grid = lrlab::TimeGrid::uniform(tf, grid_points);
        *out = new lrlab_certificate{
            lrlab::certify(h->value, mu, grid, lrlab::Permutation::identity(h->value.dimension()))};
    });
}

lrlab_status lrlab_certify_optimal(const lrlab_hamiltonian* h, double mu_lo, double mu_hi, double t_final,
                                   size_t grid_points, lrlab_certificate** out) {
    return guarded([&] {
        require(h != nullptr && out != nullptr, "null argument");
        const auto perm = lrlab::Permutation::identity(h->value.dimension());
        if (h->value.is_constant() && !(t_final > 0.0)) {
            // a_mu is constant in t: optimize first, then pick the horizon.
            const auto probe = lrlab::optimize_mu_generic(h->value, lrlab::TimeGrid::uniform(1.0, 2), mu_lo, mu_hi, perm);
            t_final = resolve_t_final(h->value, 0.0, probe.certificate.a_mu_max);
            const auto grid = lrlab::TimeGrid::uniform(t_final, grid_points);
            *out = new lrlab_certificate{lrlab::certify(h->value, probe.mu, grid, perm)};
            return;
        }
        const auto grid = lrlab::TimeGrid::uniform(resolve_t_final(h->value, t_final, 0.0), grid_points);
        *out = new lrlab_certificate{lrlab::optimize_mu_generic(h->value, grid, mu_lo, mu_hi, perm).certificate};
    });
}

void lrlab_certificate_free(lrlab_certificate* c) { delete c; }

lrlab_status lrlab_certificate_values(const lrlab_certificate* c, double* mu, double* a_mu_max,
                                      double* a_mu_timeavg, double* v_lr) {
    return guarded([&] {
        require(c != nullptr, "certificate is null");
        if (mu) *mu = c->value.mu;
        if (a_mu_max) *a_mu_max = c->value.a_mu_max;
        if (a_mu_timeavg) *a_mu_timeavg = c->value.a_mu_timeavg;
        if (v_lr) *v_lr = c->value.v_lr;
    });
}

lrlab_status lrlab_certificate_json(const lrlab_certificate* c, char** json_out) {
    return guarded([&] {
        require(c != nullptr && json_out != nullptr, "null argument");
        *json_out = dup_string(lrlab::to_json(c->value).dump(2));
    });
}

lrlab_status lrlab_bound_audit(const lrlab_hamiltonian* h, const lrlab_certificate* c, const size_t* supp_a,
                               size_t count_a, const size_t* supp_b, size_t count_b, double violation_tol,
                               lrlab_audit** out) {
    return guarded([&] {
        require(h != nullptr && c != nullptr && out != nullptr, "null argument");
        const auto a = read_block(supp_a, count_a);
        const auto b = read_block(supp_b, count_b);
        require(a.max() < h->value.dimension() && b.max() < h->value.dimension(), "support label out of range");
        *out = new lrlab_audit{lrlab::bound_audit(h->value, a, b, c->value, violation_tol)};
    });
}

void lrlab_audit_free(lrlab_audit* a) { delete a; }

lrlab_status lrlab_audit_result(const lrlab_audit* a, size_t* violations, double* min_margin) {
    return guarded([&] {
        require(a != nullptr, "audit is null");
        if (violations) *violations = a->value.violations;
        if (min_margin) *min_margin = a->value.min_margin;
    });
}

lrlab_status lrlab_audit_csv(const lrlab_audit* a, char** csv_out) {
    return guarded([&] {
        require(a != nullptr && csv_out != nullptr, "null argument");
        *csv_out = dup_string(lrlab::audit_csv(a->value));
    });
}

lrlab_status lrlab_audit_summary_json(const lrlab_audit* a, char** json_out) {
    return guarded([&] {
        require(a != nullptr && json_out != nullptr, "null argument");
        *json_out = dup_string(lrlab::audit_summary(a->value).dump(2));
    });
}

lrlab_status lrlab_spread_compute(const lrlab_hamiltonian* h, const lrlab_certificate* c, size_t source,
                                  double tol, double violation_tol, lrlab_spread** out) {
    return guarded([&] {
        require(h != nullptr && c != nullptr && out != nullptr, "null argument");
        require(source < h->value.dimension(), "source label out of range");
        lrlab::EvolveOptions opts;
        opts.tol = tol;
        const auto u = lrlab::evolve(h->value, c->value.grid, opts);
        auto report = lrlab::propagator_spread(u, source);
        auto audit = lrlab::audit_spread(report, c->value, violation_tol);
        *out = new lrlab_spread{std::move(report), audit, c->value};
    });
}

void lrlab_spread_free(lrlab_spread* s) { delete s; }

lrlab_status lrlab_spread_result(const lrlab_spread* s, size_t* checked, size_t* violations, double* min_margin) {
    return guarded([&] {
        require(s != nullptr, "spread is null");
        if (checked) *checked = s->audit.checked;
        if (violations) *violations = s->audit.violations;
        if (min_margin) *min_margin = s->audit.min_margin;
    });
}

lrlab_status lrlab_spread_csv(const lrlab_spread* s, char** csv_out) {
    return guarded([&] {
        require(s != nullptr && csv_out != nullptr, "null argument");
        *csv_out = dup_string(lrlab::spread_csv(s->report, s->certificate));
    });
}

lrlab_status lrlab_spread_svg(const lrlab_spread* s, char** svg_out) {
    return guarded([&] {
        require(s != nullptr && svg_out != nullptr, "null argument");
        *svg_out = dup_string(lrlab::spread_svg(s->report));
    });
}

lrlab_status lrlab_adiabatic_summary(const lrlab_config* c, double total_time, char** json_out) {
    return guarded([&] {
        require(c != nullptr && json_out != nullptr, "null argument");
        *json_out = dup_string(lrlab::to_json(lrlab::adiabatic_summary(c->value, total_time)).dump(2));
    });
}

lrlab_status lrlab_figure1(const lrlab_config* c, char** report_json_out) {
    return guarded([&] {
        require(c != nullptr && report_json_out != nullptr, "null argument");
        const auto result = lrlab::reproduce_figure1(c->value);
        nlohmann::json j;
        j["records"] = nlohmann::json::array();
        for (const auto& r : result.records) j["records"].push_back(lrlab::to_json(r));
        j["failures"] = nlohmann::json::array();
        for (const auto& f : result.failures) j["failures"].push_back({{"T", f.total_time}, {"message", f.message}});
        j["warnings"] = result.warnings;
        j["files"] = nlohmann::json::array();
        for (const auto& p : result.files) j["files"].push_back(p.string());
        *report_json_out = dup_string(j.dump(2));
    });
}

lrlab_status lrlab_lambert_w(double x, double* out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = lrlab::lambert_w(x);
    });
}

lrlab_status lrlab_optimal_mu_exp_local(double h, double mu_prime, double* mu_min, double* v_lr_min) {
    return guarded([&] {
        const auto r = lrlab::optimal_mu_exp_local(h, mu_prime);
        if (mu_min) *mu_min = r.mu_min;
        if (v_lr_min) *v_lr_min = r.v_lr_min;
    });
}

}  // extern "C"
