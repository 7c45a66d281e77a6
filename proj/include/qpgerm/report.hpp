#pragma once

// The analysis and verification pipelines behind the command-line tool, and
// their plain-text reports.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qpgerm/basin.hpp"
#include "qpgerm/germ_io.hpp"
#include "qpgerm/normal_form.hpp"
#include "qpgerm/orbit.hpp"

namespace qpgerm {

enum ExitCode : int { exit_ok = 0, exit_input_error = 1, exit_failure = 2 };

struct AnalyzeOptions {
    int nf_order = 6;
    int degree_bound = 6;
    double res_tol = 1e-9;
    double sd_tol = 1e-6;
    int max_blowups = 16;
    bool assert_alpha = false; // skip the resonance enumeration
};

struct ChecklistItem {
    std::string name;
    bool holds = false;
};

struct AnalysisReport {
    std::string digest;
    int n = 0;
    int order_cap = 0;
    std::vector<int> alpha;
    OneResonanceCertificate certificate;
    int nf_order = 0;
    int nf_removed = 0;
    int nf_kept = 0;
    int blowups = 0;
    std::vector<InvarianceCheck> reduction_checks;
    std::optional<std::string> reduction_error;
    InvariantProfile profile; // of the reduced germ (or the normalized one if reduction failed)
    std::optional<GermMap> good_form; // reduced and rescaled to A = 1/k
    InvariantProfile good_profile;
    cplx sigma{1.0};
    std::vector<ChecklistItem> checklist;
    bool theorem_applies = false;
};

AnalysisReport analyze(const GermFile& file, const std::string& digest, const AnalyzeOptions& opts = {});

struct VerifyOptions {
    int samples = 1000;
    std::uint64_t seed = 1;
    long max_iter = 100000;
    double rate_tol = 0.05;
    long min_rate_steps = 10000;
};

struct PetalVerification {
    Petal petal;
    BasinParams params; // after calibration
    int halvings = 0;
    double step_constant = 0.0;
    InvarianceReport invariance;
    int cross_members = 0; // samples of this petal inside another petal
    int cross_tested = 0;
    OrbitStatus orbit_status = OrbitStatus::max_iter;
    long orbit_steps = 0;
    std::vector<RateFit> rates;
    bool too_short = false;
    std::optional<std::string> error;

    bool passed(double rate_tol) const;
};

struct VerificationReport {
    std::vector<PetalVerification> petals;
    bool passed = false;
};

// Requires analysis.theorem_applies.
VerificationReport verify(const AnalysisReport& analysis, const VerifyOptions& opts = {});

void write_analysis(std::ostream& os, const AnalysisReport& rep, const AnalyzeOptions& opts);
void write_verification(std::ostream& os, const VerificationReport& rep, const VerifyOptions& opts);

// Grid slice of the basin regions: two real coordinates vary, the rest are
// fixed at base. Axis names are re_z, im_z, re_wj, im_wj.
struct SliceSpec {
    std::string x_axis = "re_w1";
    std::string y_axis = "re_w2";
    int width = 64;
    int height = 64;
    double x_min = -0.5, x_max = 0.5;
    double y_min = -0.5, y_max = 0.5;
    Point base;
};

// CSV columns ix,iy,x,y,petal,re_z,im_z,abs_u; petal is the 1-based index in
// petal_list (0 outside every region).
void write_slice_csv(std::ostream& os, const GermMap& germ, const InvariantProfile& profile,
                     const std::vector<BasinParams>& params, const SliceSpec& spec);

// Calibrated parameters for every petal, in petal_list order.
std::vector<BasinParams> calibrated_params(const AnalysisReport& analysis, int samples, std::uint64_t seed);

std::string format_complex(cplx c);

} // namespace qpgerm
