#pragma once

#include "wpf/corpus.hpp"
#include "wpf/extract.hpp"
#include "wpf/table.hpp"
#include "wpf/time.hpp"

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace wpf {

// ---------------------------------------------------------------- monthly

struct MonthlyCount {
    std::string site_id;
    std::string language;
    YearMonth month;
    std::size_t count = 0;
    bool operator==(const MonthlyCount&) const = default;
};

/// Months (MSK) that the corpus covers only partly: the first month when
/// the earliest article is after its first day, the last month when the
/// latest article is before its last day.
std::set<YearMonth> partial_months(const Corpus& corpus);

/// Article counts per (site, language, MSK month), sorted by key.
std::vector<MonthlyCount> monthly_counts(const Corpus& corpus, bool exclude_partial_months = false);

/// Translation groups per (site, MSK month of the group's earliest article);
/// `language` is empty in every row.
std::vector<MonthlyCount> monthly_group_counts(const Corpus& corpus, const std::vector<TranslationGroup>& groups,
                                               bool exclude_partial_months = false);

Table monthly_table(const std::vector<MonthlyCount>& counts);

// ---------------------------------------------------------------- weekend

struct WeekendShare {
    std::size_t posts = 0;
    double publication = 0;   // share of date_msk on Saturday or Sunday
    double modification = 0;  // share of modified_msk on Saturday or Sunday
};

/// nullopt for an empty selection. `site_id` empty means all sites.
std::optional<WeekendShare> weekend_share(const Corpus& corpus, const std::string& site_id = {});

// ---------------------------------------------------------------- coverage

struct LanguageCoverage {
    std::size_t groups = 0;
    double mean_languages = 0;
    double std_languages = 0;  // population
    double pct_without_english = 0;  // 0..100
};

std::optional<LanguageCoverage> language_coverage(const std::vector<TranslationGroup>& groups);

Table groups_table(const std::vector<TranslationGroup>& groups);
Table conflicts_table(const std::vector<ConflictReport>& reports);

// ---------------------------------------------------------------- topics

struct TopicsPerArticle {
    std::map<std::size_t, std::size_t> histogram;  // label-set size -> articles
    std::size_t articles = 0;
    double mean = 0;
    double std = 0;  // population
};

TopicsPerArticle topics_per_article_histogram(const std::map<ArticleKey, std::set<int>>& labels);

struct WeeklyTopicCount {
    std::chrono::local_days week;  // Monday, MSK
    int label = 0;
    std::size_t articles = 0;
};

/// Articles per (MSK week, label) for the `top_n` labels with the most
/// articles overall (ties broken by smaller label).
std::vector<WeeklyTopicCount> weekly_topic_counts(const Corpus& corpus,
                                                  const std::map<ArticleKey, std::set<int>>& labels,
                                                  std::size_t top_n = 10);

/// Reads `site_id,post_id,labels` rows where labels is a space-separated
/// list (possibly empty).
std::map<ArticleKey, std::set<int>> read_article_labels(std::istream& is);
Table article_labels_table(const std::map<ArticleKey, std::set<int>>& labels);

// ---------------------------------------------------------------- holidays

struct HolidayRange {
    std::string name;
    std::chrono::local_days first;
    std::chrono::local_days last;  // inclusive
};

/// CSV `name,start,end` with ISO dates; header optional.
std::vector<HolidayRange> read_holidays(std::istream& is);
std::vector<HolidayRange> load_holidays(const std::filesystem::path& path);

/// Names of ranges overlapping the Monday-to-Sunday week, joined by "; ".
std::string holiday_flag(std::chrono::local_days week_start, const std::vector<HolidayRange>& holidays);

Table weekly_topics_table(const std::vector<WeeklyTopicCount>& counts, const std::vector<HolidayRange>& holidays);

// ---------------------------------------------------------------- dataset size

struct LanguageSize {
    std::string language;  // "All" for the total row
    std::map<std::string, std::size_t> articles_per_site;
    std::size_t articles = 0;
    double mean_tokens = 0;
    double mean_sentences = 0;
};

/// Articles per site and language with mean raw tokens and sentences per
/// article, languages in code order, then an "All" row.
std::vector<LanguageSize> dataset_size(const Corpus& corpus);
Table dataset_size_table(const std::vector<LanguageSize>& rows, const std::vector<std::string>& sites);

// ---------------------------------------------------------------- charts

struct StackedChart {
    std::string title;
    std::vector<std::string> categories;  // x axis, one bar each
    std::vector<std::string> series;      // stacked segments, legend order
    std::vector<std::vector<double>> values;  // [series][category]
};

/// Self-contained SVG, byte-deterministic for identical input. Throws
/// std::invalid_argument when the value matrix does not match the labels.
std::string render_stacked_svg(const StackedChart& chart);

/// Chart of monthly counts for one site, languages stacked. Empty when the
/// site has no rows.
std::optional<StackedChart> monthly_chart(const std::vector<MonthlyCount>& counts, const std::string& site_id);

struct ChartOutput {
    std::vector<std::filesystem::path> written;
    std::vector<std::string> notices;
};

/// Writes `<stem>.svg` and `<stem>.csv` for every non-empty chart.
ChartOutput emit_charts(const std::map<std::string, StackedChart>& charts, const std::filesystem::path& out_dir);

}  // namespace wpf
