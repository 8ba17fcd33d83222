#pragma once

#include <string>
#include <vector>

#include "dltune/search/trial_log.hpp"
#include "dltune/stats/summary.hpp"

namespace dltune {

struct ReportOptions {
    AccuracyStream stream = AccuracyStream::test;  // feeds boxes, rankings and Kruskal-Wallis samples
    bool tie_correction = true;
};

/// The trial a search selected for one (dataset, model, strategy,
/// normalization) cell: highest validation accuracy, earliest on ties.
struct SelectedTrial {
    std::string dataset;
    std::string model;
    std::string strategy;
    bool normalized = false;
    TrialResult best;
};

std::vector<SelectedTrial> select_best(const std::vector<TrialRecord>& trials);

/// Panel letter a..p for model x {grid, random} x {original, normalized};
/// empty for other combinations.
std::string box_panel(const std::string& model, const std::string& strategy, bool normalized);

/// {"stream", "trials", "groups": [...], "kruskal_wallis": [...]}
std::string summary_json(const std::vector<TrialRecord>& trials, const ReportOptions& options = {});
/// panel,model,strategy,normalized,n,min,q1,median,q3,max,mean over the
/// selected accuracy of every dataset.
std::string boxdata_csv(const std::vector<TrialRecord>& trials, const ReportOptions& options = {});
/// model,strategy,normalized,rank,dataset,accuracy
std::string ranking_csv(const std::vector<TrialRecord>& trials, const ReportOptions& options = {});
/// method,model,strategy,runs,trials,mean_seconds
std::string timing_csv(const std::vector<TrialRecord>& trials);

/// Writes summary.json, boxdata.csv, ranking.csv and timing.csv into dir.
void write_report(const std::vector<TrialRecord>& trials, const std::string& dir, const ReportOptions& options = {});

/// Writes text to path, replacing any previous file.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace dltune
