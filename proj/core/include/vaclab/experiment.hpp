#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vaclab/conditions.hpp"
#include "vaclab/observer.hpp"
#include "vaclab/psychometric.hpp"
#include "vaclab/report.hpp"
#include "vaclab/staircase.hpp"
#include "vaclab/stimuli.hpp"
#include "vaclab/wilcoxon.hpp"

// Simulated experiment runners. Two protocols:
//
//  - disparity detection (4AFC): constant stimuli on the moving-diamond
//    display; the observer tracks the diamond while one circle carries extra
//    crossed disparity for one second per trial. The decision stage draws a
//    noisy perceived depth per circle and picks the nearest-looking one, so
//    accuracy sits at chance for zero disparity and the fitted 62.5%
//    threshold scales with the observer's effective disparity noise.
//
//  - time to fuse (2AFC): interleaved per-condition/per-depth 1-up/2-down
//    staircases on presentation duration. A trial is answerable once the
//    observer has fused and sharpened the stereogram, plus a fixed
//    stereo-processing latency; response reliability rises smoothly with
//    presentation time beyond that point.
//
// Every run is a pure function of (config, seed).

namespace vaclab {

struct TrialRecord {
    int trial = 0;
    std::string condition;
    double level = 0.0;  // arcmin (disparity task) or seconds (fuse task)
    int response = 0;
    bool correct = false;
    double rt_s = 0.0;
    bool timed_out = false;
    std::uint64_t seed = 0;
};

// CSV rows `trial,condition,level,response,correct,rt_s,timed_out,seed`.
void write_trial_log_csv(std::ostream& out, const std::vector<TrialRecord>& trials);

struct DisparityProtocol {
    std::vector<double> levels_arcmin = {0.0, 0.8, 1.6, 2.4, 3.2, 4.0};
    int trials_per_level = 20;
    int n_alternatives = 4;
    double response_timeout_s = 4.0;
    double timeout_probability = 0.02;
    double criterion = 0.625;
    double dt_s = 0.005;
    bool feedback = true;
    DiamondStimulusParams diamond;  // trajectory and cadence
};

struct FuseProtocol {
    std::vector<double> depths_rel_d = {-0.25, 0.25, 0.75, 1.5};
    StaircaseConfig staircase{1.0, 1.26, 0.794, 12, 0.02, 8.0};
    double criterion = 0.75;
    double cross_duration_s = 2.0;
    double stereo_latency_s = 0.15;
    double duration_noise_floor_s = 0.05;
    double duration_noise_frac = 0.25;
    double observer_dt_s = 0.002;
};

struct DisparitySession {
    std::vector<TrialRecord> trials;
    std::vector<PsychTrial> psych;
    std::vector<LensCommandLogRow> demand_log;  // per-window demand schedule
    std::vector<ObserverState> trace;           // first trajectory period
    double accuracy_at_max_level = 0.0;
};

DisparitySession run_disparity_session(const DisparityProtocol& protocol,
                                       const ViewingCondition& condition,
                                       const DisplayGeometry& geom,
                                       const ObserverParams& observer, std::uint64_t seed);

struct FuseCell {
    std::string condition;
    double depth_rel_d = 0.0;
    double fuse_time_s = 0.0;  // deterministic criterion time for this observer
    bool fused = false;
    std::vector<TrialRecord> trials;
    std::vector<PsychTrial> psych;
    double accuracy_at_long_durations = 0.0;
};

struct FuseSession {
    std::vector<FuseCell> cells;  // condition-major, depth-minor
    std::vector<TrialRecord> trials;  // full interleaved log
};

// Both conditions run randomly interleaved within one session.
FuseSession run_fuse_session(const FuseProtocol& protocol, const ViewingCondition& condition_a,
                             const ViewingCondition& condition_b, const DisplayGeometry& geom,
                             const ObserverParams& observer, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Studies: a cohort of jittered observers, per-subject fits with bootstrap
// CIs, pooled fits, accuracy-filter flags, and a paired signed-rank test.

struct StudyConfig {
    DisplayGeometry geometry;
    ViewingCondition condition_a;  // the manipulation (e.g. dynamic, monovision)
    ViewingCondition condition_b;  // the conventional baseline
    ObserverParams observer;
    int n_subjects = 16;
    double subject_jitter = 0.10;
    int bootstrap_resamples = 500;
    Tail wilcoxon_tail = Tail::Greater;
    int threads = 1;
    std::uint64_t seed = 1;
};

// Observer parameters for one simulated subject: multiplicative log-normal
// jitter on sensitivity and dynamics, clamped to legal ranges.
ObserverParams jittered_observer(const ObserverParams& base, double jitter, std::uint64_t seed);

struct SubjectThreshold {
    int subject = 0;  // -1 marks the pooled row
    std::string condition;
    double depth_rel_d = 0.0;  // fuse study only
    double threshold = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    int n_trials = 0;
    bool flagged = false;
    bool fit_failed = false;
};

struct DisparityStudyResult {
    DisparityProtocol protocol;
    std::vector<SubjectThreshold> rows;
    double pooled_a = 0.0;
    double pooled_b = 0.0;
    WilcoxonResult test;  // per-subject threshold differences (b - a)
    std::vector<std::vector<TrialRecord>> subject_trials_a;
    std::vector<std::vector<TrialRecord>> subject_trials_b;
    std::vector<ObserverState> example_trace_a;
    std::vector<LensCommandLogRow> example_demands_a;
};

DisparityStudyResult run_disparity_study(const DisparityProtocol& protocol,
                                         const StudyConfig& config);

struct FuseStudyResult {
    FuseProtocol protocol;
    std::vector<SubjectThreshold> rows;  // per subject x condition x depth + pooled
    // Pooled 75% durations indexed [condition][depth].
    std::vector<std::vector<double>> pooled;
    std::vector<WilcoxonResult> test_per_depth;  // b - a differences
    std::vector<std::vector<TrialRecord>> subject_trials;
};

FuseStudyResult run_fuse_study(const FuseProtocol& protocol, const StudyConfig& config);

// CSV `subject,condition,depth_rel_d,threshold,ci_low,ci_high,n_trials,flagged`
// with the pooled rows labelled "pooled".
void write_threshold_table_csv(std::ostream& out, const std::vector<SubjectThreshold>& rows);

// Questionnaire ingestion: CSV `subject,session,item,rating` with a header.
// Ratings are compared across the two sessions per item with the signed-rank
// test (human data is ingested, never synthesized).
struct QuestionnaireRecord {
    std::string subject;
    std::string session;
    std::string item;
    double rating = 0.0;
};

std::vector<QuestionnaireRecord> parse_questionnaire_csv(std::istream& in);

struct QuestionnaireItemTest {
    std::string item;
    int n_pairs = 0;
    double p = 1.0;
    bool tested = false;  // false when too few non-zero differences remain
};

std::vector<QuestionnaireItemTest> questionnaire_tests(
    const std::vector<QuestionnaireRecord>& records, const std::string& session_a,
    const std::string& session_b, Tail tail);

}  // namespace vaclab
