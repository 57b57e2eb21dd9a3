#include "wpf/report.hpp"

#include "wpf/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

namespace wpf {

namespace chr = std::chrono;

namespace {

struct MeanStd {
    double mean = 0;
    double std = 0;
};

MeanStd population(const std::vector<double>& xs) {
    MeanStd out;
    if (xs.empty()) return out;
    for (double x : xs) out.mean += x;
    out.mean /= static_cast<double>(xs.size());
    double ss = 0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(xs.size()));
    return out;
}

std::string join_labels(const std::set<int>& labels) {
    std::string out;
    for (int l : labels) out += (out.empty() ? "" : " ") + std::to_string(l);
    return out;
}

std::string svg_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    // two decimals, trailing zeros trimmed, so output is stable and compact
    auto s = format_double(v, 2);
    while (s.find('.') != std::string::npos && (s.back() == '0' || s.back() == '.')) {
        bool dot = s.back() == '.';
        s.pop_back();
        if (dot) break;
    }
    if (s == "-0") s = "0";
    return s;
}

double nice_ceiling(double v) {
    if (v <= 0) return 1;
    double mag = std::pow(10.0, std::floor(std::log10(v)));
    for (double step : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (step * mag >= v) return step * mag;
    }
    return 10 * mag;
}

}  // namespace

// ---------------------------------------------------------------- monthly

std::set<YearMonth> partial_months(const Corpus& corpus) {
    std::set<YearMonth> out;
    if (corpus.empty()) return out;
    auto [lo, hi] = std::minmax_element(corpus.begin(), corpus.end(),
                                        [](const Article& a, const Article& b) { return a.date_msk < b.date_msk; });
    auto first = chr::floor<chr::days>(lo->date_msk);
    auto last = chr::floor<chr::days>(hi->date_msk);
    auto first_month = year_month(lo->date_msk);
    auto last_month = year_month(hi->date_msk);
    if (first != first_day(first_month)) out.insert(first_month);
    if (last != last_day(last_month)) out.insert(last_month);
    return out;
}

std::vector<MonthlyCount> monthly_counts(const Corpus& corpus, bool exclude_partial) {
    auto partial = exclude_partial ? partial_months(corpus) : std::set<YearMonth>{};
    std::map<std::tuple<std::string, std::string, YearMonth>, std::size_t> counts;
    for (const auto& a : corpus) {
        auto ym = year_month(a.date_msk);
        if (partial.contains(ym)) continue;
        ++counts[{a.site_id, a.language, ym}];
    }
    std::vector<MonthlyCount> out;
    for (const auto& [k, n] : counts) out.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), n});
    return out;
}

std::vector<MonthlyCount> monthly_group_counts(const Corpus& corpus, const std::vector<TranslationGroup>& groups,
                                               bool exclude_partial) {
    auto partial = exclude_partial ? partial_months(corpus) : std::set<YearMonth>{};
    std::map<std::pair<std::string, YearMonth>, std::size_t> counts;
    for (const auto& g : groups) {
        const Article* earliest = nullptr;
        for (const auto& key : g.article_keys) {
            const Article* a = corpus.find(key);
            if (a && (!earliest || a->date_msk < earliest->date_msk)) earliest = a;
        }
        if (!earliest) continue;
        auto ym = year_month(earliest->date_msk);
        if (partial.contains(ym)) continue;
        ++counts[{g.article_keys.front().site_id, ym}];
    }
    std::vector<MonthlyCount> out;
    for (const auto& [k, n] : counts) out.push_back({k.first, "", k.second, n});
    return out;
}

Table monthly_table(const std::vector<MonthlyCount>& counts) {
    Table t;
    t.header = {"site", "language", "month", "count"};
    for (const auto& c : counts) t.add({c.site_id, c.language, c.month.str(), std::to_string(c.count)});
    return t;
}

// ---------------------------------------------------------------- weekend

std::optional<WeekendShare> weekend_share(const Corpus& corpus, const std::string& site_id) {
    WeekendShare out;
    std::size_t pub = 0, mod = 0;
    for (const auto& a : corpus) {
        if (!site_id.empty() && a.site_id != site_id) continue;
        ++out.posts;
        pub += is_weekend(a.date_msk);
        mod += is_weekend(a.modified_msk);
    }
    if (out.posts == 0) return std::nullopt;
    out.publication = static_cast<double>(pub) / static_cast<double>(out.posts);
    out.modification = static_cast<double>(mod) / static_cast<double>(out.posts);
    return out;
}

// ---------------------------------------------------------------- coverage

std::optional<LanguageCoverage> language_coverage(const std::vector<TranslationGroup>& groups) {
    if (groups.empty()) return std::nullopt;
    std::vector<double> sizes;
    std::size_t without_en = 0;
    for (const auto& g : groups) {
        sizes.push_back(static_cast<double>(g.language_count()));
        without_en += !g.members.contains("en");
    }
    auto ms = population(sizes);
    LanguageCoverage out;
    out.groups = groups.size();
    out.mean_languages = ms.mean;
    out.std_languages = ms.std;
    out.pct_without_english = 100.0 * static_cast<double>(without_en) / static_cast<double>(groups.size());
    return out;
}

Table groups_table(const std::vector<TranslationGroup>& groups) {
    Table t;
    t.header = {"group_id", "language", "site", "post_id", "orphaned"};
    for (const auto& g : groups) {
        for (const auto& [lang, key] : g.members) {
            t.add({std::to_string(g.group_id), lang, key.site_id, std::to_string(key.post_id), g.orphaned ? "true" : "false"});
        }
    }
    return t;
}

Table conflicts_table(const std::vector<ConflictReport>& reports) {
    Table t;
    t.header = {"kind", "group_id", "language", "articles", "url"};
    for (const auto& r : reports) {
        std::string keys;
        for (const auto& k : r.articles) keys += (keys.empty() ? "" : " ") + k.str();
        t.add({std::string(to_string(r.kind)), std::to_string(r.group_id), r.language, keys, r.url});
    }
    return t;
}

// ---------------------------------------------------------------- topics

TopicsPerArticle topics_per_article_histogram(const std::map<ArticleKey, std::set<int>>& labels) {
    TopicsPerArticle out;
    std::vector<double> sizes;
    for (const auto& [key, set] : labels) {
        ++out.histogram[set.size()];
        sizes.push_back(static_cast<double>(set.size()));
    }
    out.articles = labels.size();
    auto ms = population(sizes);
    out.mean = ms.mean;
    out.std = ms.std;
    return out;
}

std::vector<WeeklyTopicCount> weekly_topic_counts(const Corpus& corpus, const std::map<ArticleKey, std::set<int>>& labels,
                                                  std::size_t top_n) {
    std::map<int, std::size_t> totals;
    for (const auto& [key, set] : labels) {
        if (!corpus.find(key)) continue;
        for (int l : set) ++totals[l];
    }
    std::vector<std::pair<int, std::size_t>> ranked(totals.begin(), totals.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::set<int> top;
    for (std::size_t i = 0; i < std::min(top_n, ranked.size()); ++i) top.insert(ranked[i].first);

    std::map<std::pair<chr::local_days, int>, std::size_t> counts;
    for (const auto& [key, set] : labels) {
        const Article* a = corpus.find(key);
        if (!a) continue;
        for (int l : set) {
            if (top.contains(l)) ++counts[{week_start(a->date_msk), l}];
        }
    }
    std::vector<WeeklyTopicCount> out;
    for (const auto& [k, n] : counts) out.push_back({k.first, k.second, n});
    return out;
}

std::map<ArticleKey, std::set<int>> read_article_labels(std::istream& is) {
    std::map<ArticleKey, std::set<int>> out;
    auto rows = read_csv(is);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (r == 0 && !row.empty() && row[0] == "site_id") continue;
        if (row.size() < 2) throw CorpusFormatError(r + 1, "label rows need site_id,post_id,labels");
        std::set<int> labels;
        try {
            if (row.size() > 2) {
                std::istringstream ls(row[2]);
                int l;
                while (ls >> l) labels.insert(l);
                if (!ls.eof()) throw std::invalid_argument("bad label list");
            }
            out[{row[0], std::stoll(row[1])}] = labels;
        } catch (const std::exception& e) {
            throw CorpusFormatError(r + 1, e.what());
        }
    }
    return out;
}

Table article_labels_table(const std::map<ArticleKey, std::set<int>>& labels) {
    Table t;
    t.header = {"site_id", "post_id", "labels"};
    for (const auto& [key, set] : labels) t.add({key.site_id, std::to_string(key.post_id), join_labels(set)});
    return t;
}

// ---------------------------------------------------------------- holidays

std::vector<HolidayRange> read_holidays(std::istream& is) {
    std::vector<HolidayRange> out;
    auto rows = read_csv(is);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (r == 0 && !row.empty() && row[0] == "name") continue;
        if (row.size() != 3) throw CorpusFormatError(r + 1, "holiday rows need name,start,end");
        try {
            HolidayRange h{row[0], parse_date(row[1]), parse_date(row[2])};
            if (h.last < h.first) throw std::invalid_argument("end before start");
            out.push_back(std::move(h));
        } catch (const std::exception& e) {
            throw CorpusFormatError(r + 1, e.what());
        }
    }
    return out;
}

std::vector<HolidayRange> load_holidays(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_holidays(in);
}

std::string holiday_flag(chr::local_days week, const std::vector<HolidayRange>& holidays) {
    std::string out;
    auto week_end = week + chr::days{6};
    for (const auto& h : holidays) {
        if (h.first <= week_end && h.last >= week) out += (out.empty() ? "" : "; ") + h.name;
    }
    return out;
}

Table weekly_topics_table(const std::vector<WeeklyTopicCount>& counts, const std::vector<HolidayRange>& holidays) {
    Table t;
    t.header = {"week", "label", "articles", "holiday"};
    for (const auto& c : counts) {
        t.add({format_date(c.week), std::to_string(c.label), std::to_string(c.articles), holiday_flag(c.week, holidays)});
    }
    return t;
}

// ---------------------------------------------------------------- dataset size

std::vector<LanguageSize> dataset_size(const Corpus& corpus) {
    std::map<std::string, LanguageSize> by_lang;
    LanguageSize all;
    all.language = "All";
    for (const auto& a : corpus) {
        auto tokens = static_cast<double>(tokenize(a.text, TokenMode::Raw).size());
        auto sentences = static_cast<double>(article_sentences(a).size());
        for (LanguageSize* row : {&by_lang[a.language], &all}) {
            ++row->articles_per_site[a.site_id];
            ++row->articles;
            row->mean_tokens += tokens;
            row->mean_sentences += sentences;
        }
    }
    std::vector<LanguageSize> out;
    for (auto& [lang, row] : by_lang) {
        row.language = lang;
        out.push_back(row);
    }
    if (!corpus.empty()) out.push_back(all);
    for (auto& row : out) {
        row.mean_tokens /= static_cast<double>(row.articles);
        row.mean_sentences /= static_cast<double>(row.articles);
    }
    return out;
}

Table dataset_size_table(const std::vector<LanguageSize>& rows, const std::vector<std::string>& sites) {
    Table t;
    t.header = {"language"};
    for (const auto& s : sites) t.header.push_back(s);
    for (const char* h : {"total", "mean_tokens", "mean_sentences"}) t.header.push_back(h);
    for (const auto& r : rows) {
        std::vector<std::string> row{r.language};
        for (const auto& s : sites) {
            auto it = r.articles_per_site.find(s);
            row.push_back(it == r.articles_per_site.end() ? "0" : std::to_string(it->second));
        }
        row.push_back(std::to_string(r.articles));
        row.push_back(format_double(r.mean_tokens, 2));
        row.push_back(format_double(r.mean_sentences, 2));
        t.add(std::move(row));
    }
    return t;
}

// ---------------------------------------------------------------- charts

std::string render_stacked_svg(const StackedChart& c) {
    if (c.values.size() != c.series.size()) throw std::invalid_argument("one value row per series required");
    for (const auto& row : c.values) {
        if (row.size() != c.categories.size()) throw std::invalid_argument("one value per category required");
        for (double v : row) {
            if (!(v >= 0) || !std::isfinite(v)) throw std::invalid_argument("values must be finite and non-negative");
        }
    }
    static const char* palette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};
    const double left = 60, right = 150, top = 40, bottom = 60, plot_h = 300;
    const double bar_w = 24, gap = 12;
    const double plot_w = std::max(1.0, static_cast<double>(c.categories.size())) * (bar_w + gap) + gap;
    const double width = left + plot_w + right, height = top + plot_h + bottom;

    double max_total = 0;
    for (std::size_t j = 0; j < c.categories.size(); ++j) {
        double total = 0;
        for (const auto& row : c.values) total += row[j];
        max_total = std::max(max_total, total);
    }
    const double y_max = nice_ceiling(max_total);
    auto y_of = [&](double v) { return top + plot_h - v / y_max * plot_h; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
       << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    os << "<text x=\"" << num(width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << svg_escape(c.title)
       << "</text>\n";
    os << "<g class=\"axis\">\n";
    for (int i = 0; i <= 4; ++i) {
        double v = y_max * i / 4;
        double y = y_of(v);
        os << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left + plot_w) << "\" y2=\"" << num(y)
           << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
    }
    os << "<line x1=\"" << num(left) << "\" y1=\"" << num(top + plot_h) << "\" x2=\"" << num(left + plot_w) << "\" y2=\""
       << num(top + plot_h) << "\" stroke=\"#000000\"/>\n";
    os << "</g>\n";
    for (std::size_t j = 0; j < c.categories.size(); ++j) {
        double x = left + gap + static_cast<double>(j) * (bar_w + gap);
        os << "<g class=\"bar\" data-category=\"" << svg_escape(c.categories[j]) << "\">\n";
        double base = 0;
        for (std::size_t s = 0; s < c.series.size(); ++s) {
            double v = c.values[s][j];
            if (v > 0) {
                os << "<rect x=\"" << num(x) << "\" y=\"" << num(y_of(base + v)) << "\" width=\"" << num(bar_w)
                   << "\" height=\"" << num(y_of(base) - y_of(base + v)) << "\" fill=\"" << palette[s % 10]
                   << "\"><title>" << svg_escape(c.series[s]) << ' ' << svg_escape(c.categories[j]) << ": " << num(v)
                   << "</title></rect>\n";
            }
            base += v;
        }
        double lx = x + bar_w / 2, ly = top + plot_h + 12;
        os << "<text x=\"" << num(lx) << "\" y=\"" << num(ly) << "\" text-anchor=\"end\" transform=\"rotate(-45 "
           << num(lx) << ' ' << num(ly) << ")\">" << svg_escape(c.categories[j]) << "</text>\n";
        os << "</g>\n";
    }
    os << "<g class=\"legend\">\n";
    for (std::size_t s = 0; s < c.series.size(); ++s) {
        double y = top + static_cast<double>(s) * 18;
        double x = left + plot_w + 20;
        os << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"12\" height=\"12\" fill=\"" << palette[s % 10]
           << "\"/>\n";
        os << "<text x=\"" << num(x + 18) << "\" y=\"" << num(y + 10) << "\">" << svg_escape(c.series[s]) << "</text>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

std::optional<StackedChart> monthly_chart(const std::vector<MonthlyCount>& counts, const std::string& site_id) {
    std::set<YearMonth> months;
    std::set<std::string> langs;
    for (const auto& c : counts) {
        if (c.site_id != site_id) continue;
        months.insert(c.month);
        langs.insert(c.language.empty() ? "groups" : c.language);
    }
    if (months.empty()) return std::nullopt;
    StackedChart chart;
    chart.title = "Monthly posts: " + site_id;
    for (const auto& m : months) chart.categories.push_back(m.str());
    chart.series.assign(langs.begin(), langs.end());
    chart.values.assign(chart.series.size(), std::vector<double>(chart.categories.size(), 0));
    for (const auto& c : counts) {
        if (c.site_id != site_id) continue;
        auto s = std::distance(langs.begin(), langs.find(c.language.empty() ? "groups" : c.language));
        auto m = std::distance(months.begin(), months.find(c.month));
        chart.values[static_cast<std::size_t>(s)][static_cast<std::size_t>(m)] += static_cast<double>(c.count);
    }
    return chart;
}

ChartOutput emit_charts(const std::map<std::string, StackedChart>& charts, const std::filesystem::path& out_dir) {
    ChartOutput out;
    for (const auto& [stem, chart] : charts) {
        bool empty = chart.categories.empty() || chart.series.empty();
        if (!empty) {
            empty = true;
            for (const auto& row : chart.values) {
                for (double v : row) empty = empty && v == 0;
            }
        }
        if (empty) {
            out.notices.push_back("chart " + stem + " skipped: no data");
            continue;
        }
        auto svg = render_stacked_svg(chart);
        std::filesystem::create_directories(out_dir);
        auto svg_path = out_dir / (stem + ".svg");
        std::ofstream(svg_path, std::ios::binary) << svg;
        Table t;
        t.header = {"category"};
        for (const auto& s : chart.series) t.header.push_back(s);
        for (std::size_t j = 0; j < chart.categories.size(); ++j) {
            std::vector<std::string> row{chart.categories[j]};
            for (const auto& series : chart.values) row.push_back(num(series[j]));
            t.add(std::move(row));
        }
        auto csv_path = out_dir / (stem + ".csv");
        write_table(csv_path, t, TableFormat::Csv);
        out.written.push_back(svg_path);
        out.written.push_back(csv_path);
    }
    return out;
}

}  // namespace wpf
