#include "irisim/irisim.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>

#include "irisim/errors.hpp"
#include "irisim/harness.hpp"
#include "irisim/pnc.hpp"

struct irisim_experiment {
    irisim::ExperimentConfig config;
};

namespace {

thread_local std::string g_last_error;

irisim_status fail(irisim_status s, std::string msg) {
    g_last_error = std::move(msg);
    return s;
}

template <class F>
irisim_status guarded(F&& body) {
    try {
        g_last_error.clear();
        body();
        return IRISIM_OK;
    } catch (const irisim::ConfigError& e) {
        return fail(IRISIM_ERR_CONFIG, e.what());
    } catch (const irisim::IoError& e) {
        return fail(IRISIM_ERR_IO, e.what());
    } catch (const irisim::DomainError& e) {
        return fail(IRISIM_ERR_DOMAIN, e.what());
    } catch (const irisim::InjectivityViolation& e) {
        return fail(IRISIM_ERR_INJECTIVITY, e.what());
    } catch (const irisim::UnsupportedSize& e) {
        return fail(IRISIM_ERR_UNSUPPORTED, e.what());
    } catch (const irisim::UnknownFigure& e) {
        return fail(IRISIM_ERR_UNKNOWN_FIGURE, e.what());
    } catch (const irisim::InsufficientSamples& e) {
        return fail(IRISIM_ERR_INSUFFICIENT_SAMPLES, e.what());
    } catch (const irisim::NonPositiveDistance& e) {
        return fail(IRISIM_ERR_DOMAIN, e.what());
    } catch (const std::exception& e) {
        return fail(IRISIM_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(IRISIM_ERR_INTERNAL, "unknown error");
    }
}

irisim::Modulation to_modulation(irisim_modulation m) {
    switch (m) {
        case IRISIM_BPSK: return irisim::Modulation::BPSK;
        case IRISIM_QPSK: return irisim::Modulation::QPSK;
    }
    throw irisim::DomainError("unknown modulation");
}

void copy_out(const std::string& s, char* buf, std::size_t cap) {
    if (!buf || cap == 0) return;
    const std::size_t n = std::min(cap - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
}

}  // namespace

extern "C" {

irisim_status irisim_experiment_create(const char* config_json, irisim_experiment** out) {
    if (!out) return fail(IRISIM_ERR_INVALID_ARGUMENT, "out must not be NULL");
    *out = nullptr;
    if (!config_json) return fail(IRISIM_ERR_INVALID_ARGUMENT, "config_json must not be NULL");
    return guarded([&] { *out = new irisim_experiment{irisim::parse_experiment_config(config_json)}; });
}

void irisim_experiment_destroy(irisim_experiment* exp) { delete exp; }

irisim_status irisim_experiment_apply_overrides(irisim_experiment* exp, const char* overrides_json) {
    if (!exp) return fail(IRISIM_ERR_INVALID_ARGUMENT, "experiment must not be NULL");
    if (!overrides_json) return IRISIM_OK;
    return guarded([&] { exp->config = irisim::apply_overrides(exp->config, overrides_json); });
}

irisim_status irisim_experiment_config_json(const irisim_experiment* exp, char* buf, size_t capacity,
                                            size_t* needed) {
    if (!exp) return fail(IRISIM_ERR_INVALID_ARGUMENT, "experiment must not be NULL");
    return guarded([&] {
        const std::string s = irisim::experiment_config_json(exp->config);
        if (needed) *needed = s.size() + 1;
        if (buf && capacity >= s.size() + 1) copy_out(s, buf, capacity);
    });
}

irisim_status irisim_experiment_run(irisim_experiment* exp, irisim_run_mode mode, const char* csv_path) {
    if (!exp) return fail(IRISIM_ERR_INVALID_ARGUMENT, "experiment must not be NULL");
    if (mode != IRISIM_RUN_SIM && mode != IRISIM_RUN_THEORY && mode != IRISIM_RUN_BOTH)
        return fail(IRISIM_ERR_INVALID_ARGUMENT, "unknown run mode");
    return guarded([&] {
        const auto m = mode == IRISIM_RUN_SIM ? irisim::RunMode::Sim
                       : mode == IRISIM_RUN_THEORY ? irisim::RunMode::Theory
                                                   : irisim::RunMode::Both;
        if (!csv_path) {
            irisim::run_to_csv(exp->config, m, std::cout);
            return;
        }
        std::ofstream os(csv_path, std::ios::binary);
        if (!os) throw irisim::IoError(std::string("cannot open '") + csv_path + "' for writing");
        irisim::run_to_csv(exp->config, m, os);
    });
}

irisim_status irisim_experiment_write_frame_log(irisim_experiment* exp, irisim_scheme scheme, double snr_db,
                                                uint64_t frame_index, const char* path) {
    if (!exp) return fail(IRISIM_ERR_INVALID_ARGUMENT, "experiment must not be NULL");
    if (scheme != IRISIM_SCHEME_TWOPATH && scheme != IRISIM_SCHEME_BASELINE)
        return fail(IRISIM_ERR_INVALID_ARGUMENT, "unknown scheme");
    return guarded([&] {
        const auto& grid = exp->config.snr_grid_db;
        const auto it = std::find(grid.begin(), grid.end(), snr_db);
        const std::size_t point = static_cast<std::size_t>(it - grid.begin());
        const auto s = scheme == IRISIM_SCHEME_TWOPATH ? irisim::Scheme::TwoPathIRIC : irisim::Scheme::BaselineCFNC;
        if (!path) {
            irisim::write_frame_log_for(std::cout, exp->config, s, snr_db, point, frame_index);
            return;
        }
        std::ofstream os(path, std::ios::binary);
        if (!os) throw irisim::IoError(std::string("cannot open '") + path + "' for writing");
        irisim::write_frame_log_for(os, exp->config, s, snr_db, point, frame_index);
        if (!os) throw irisim::IoError(std::string("failed writing '") + path + "'");
    });
}

irisim_status irisim_experiment_bounds(const irisim_experiment* exp, double snr_db, irisim_bound_report* out) {
    if (!exp || !out) return fail(IRISIM_ERR_INVALID_ARGUMENT, "experiment and out must not be NULL");
    return guarded([&] {
        const auto& grid = exp->config.snr_grid_db;
        const auto point = static_cast<std::size_t>(std::find(grid.begin(), grid.end(), snr_db) - grid.begin());
        const auto b = irisim::bounds_at(exp->config, snr_db, point);
        *out = irisim_bound_report{b.snr_sr_db,  b.snr_rd_db,      b.P_e_RD,
                                   b.P_e_RD_MRC, b.P_e_SR,         b.P_e_SR_noIRI,
                                   b.P_prime,    b.P_prime_MRC,    b.P_triple_prime,
                                   b.P_case1,    b.P_case2,        b.T_cfnc_lb,
                                   b.T_new_lb,   b.T_new_lb_finite.value_or(b.T_new_lb),
                                   b.sr_standard_error, b.saturated ? 1 : 0};
    });
}

irisim_status irisim_reproduce_figure(const char* figure_id, const char* out_dir, const char* overrides_json,
                                      char* csv_path_buf, size_t capacity) {
    if (!figure_id) return fail(IRISIM_ERR_INVALID_ARGUMENT, "figure_id must not be NULL");
    return guarded([&] {
        const std::string dir = out_dir ? std::string(out_dir) : irisim::default_output_dir();
        const auto res = irisim::reproduce_figure(figure_id, dir, overrides_json ? overrides_json : "");
        copy_out(res.csv_path, csv_path_buf, capacity);
    });
}

double irisim_q_function(double x) { return irisim::q_function(x); }

irisim_status irisim_pnc_f(irisim_modulation m, double z_re, double z_im, double* out_re, double* out_im) {
    if (!out_re) return fail(IRISIM_ERR_INVALID_ARGUMENT, "out_re must not be NULL");
    return guarded([&] {
        if (to_modulation(m) == irisim::Modulation::BPSK) {
            *out_re = irisim::f_bpsk(z_re);
            if (out_im) *out_im = 0.0;
        } else {
            const auto v = irisim::f_qpsk({z_re, z_im});
            *out_re = v.real();
            if (out_im) *out_im = v.imag();
        }
    });
}

irisim_status irisim_pnc_g(irisim_modulation m, double a_re, double a_im, double b_re, double b_im,
                           double* out_re, double* out_im) {
    if (!out_re) return fail(IRISIM_ERR_INVALID_ARGUMENT, "out_re must not be NULL");
    return guarded([&] {
        if (to_modulation(m) == irisim::Modulation::BPSK) {
            *out_re = irisim::g_bpsk(a_re, b_re);
            if (out_im) *out_im = 0.0;
        } else {
            const auto v = irisim::g_qpsk({a_re, a_im}, {b_re, b_im});
            *out_re = v.real();
            if (out_im) *out_im = v.imag();
        }
    });
}

const char* irisim_last_error(void) { return g_last_error.c_str(); }

const char* irisim_version(void) {
    static const std::string v(irisim::library_version());
    return v.c_str();
}

const char* irisim_status_name(irisim_status status) {
    switch (status) {
        case IRISIM_OK: return "ok";
        case IRISIM_ERR_INTERNAL: return "internal error";
        case IRISIM_ERR_CONFIG: return "configuration error";
        case IRISIM_ERR_IO: return "I/O error";
        case IRISIM_ERR_INVALID_ARGUMENT: return "invalid argument";
        case IRISIM_ERR_DOMAIN: return "domain error";
        case IRISIM_ERR_INJECTIVITY: return "injectivity violation";
        case IRISIM_ERR_UNSUPPORTED: return "unsupported size";
        case IRISIM_ERR_UNKNOWN_FIGURE: return "unknown figure";
        case IRISIM_ERR_INSUFFICIENT_SAMPLES: return "insufficient samples";
    }
    return "unknown status";
}

}  // extern "C"
