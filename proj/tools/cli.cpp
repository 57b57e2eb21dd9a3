#include "cli.hpp"

#include "CLI11.hpp"
#include "json.hpp"
#include "wpf/backdate.hpp"
#include "wpf/corpus.hpp"
#include "wpf/embeddings.hpp"
#include "wpf/extract.hpp"
#include "wpf/harvest.hpp"
#include "wpf/lexicon.hpp"
#include "wpf/ngrams.hpp"
#include "wpf/report.hpp"
#include "wpf/table.hpp"
#include "wpf/text.hpp"
#include "wpf/topics.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>

namespace wpf::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Options every analyze verb accepts.
struct Common {
    std::string corpus;
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, Common& c, bool out_required = true) {
    cmd->add_option("--corpus", c.corpus, "corpus JSONL file")->required()->check(CLI::ExistingFile);
    auto* out = cmd->add_option("--out", c.out, "output file or directory");
    if (out_required) out->required();
    cmd->add_option("--format", c.format, "table format")->check(CLI::IsMember({"csv", "jsonl"}));
    cmd->add_option("--seed", c.seed, "seed for synthetic-data generators");
}

TableFormat fmt(const Common& c) { return parse_table_format(c.format); }

// `--out` names a file when it has an extension, otherwise a directory that
// receives `<stem>.<ext>`.
fs::path table_path(const Common& c, std::string_view stem) {
    fs::path p(c.out);
    if (p.has_extension()) {
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        return p;
    }
    fs::create_directories(p);
    return p / (std::string(stem) + std::string(extension(fmt(c))));
}

fs::path out_dir(const Common& c) {
    fs::path p(c.out);
    fs::create_directories(p);
    return p;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
}

std::string opt_str(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

// ---------------------------------------------------------------- harvest

struct HarvestArgs {
    std::string site;
    std::string id;
    std::string out;
    double rate = 2.0;
    int page_size = 100;
    int max_retries = 3;
    int backoff_ms = 500;
    int concurrency = 4;
    int timeout = 30;
    std::string user_agent = "wpforensics/0.1";
};

int do_harvest(const HarvestArgs& a, std::ostream& out, std::ostream& err) {
    SiteConfig config;
    config.site_id = a.id;
    config.base_url = a.site;
    config.rate_limit = a.rate;
    config.page_size = a.page_size;
    config.retry_policy.max_retries = a.max_retries;
    config.retry_policy.backoff_base_ms = a.backoff_ms;
    config.concurrency = a.concurrency;
    config.timeout_seconds = a.timeout;
    config.user_agent = a.user_agent;
    config.validate();
    auto transport = make_http_transport();
    auto manifest = snapshot(config, a.out, *transport);
    out << "site " << manifest.site_id << ": " << manifest.post_count << " posts, " << manifest.page_html_count
        << " pages, " << manifest.requests << " requests, " << manifest.retries << " retries, "
        << manifest.files_written << " files written\n";
    for (const auto& f : manifest.failures) {
        err << "failure [" << to_string(f.kind) << "] " << f.url << ": " << f.detail << '\n';
    }
    if (manifest.failures.empty()) return kExitOk;
    return manifest.post_count > 0 ? kExitPartial : kExitFailure;
}

// ---------------------------------------------------------------- extract

struct ExtractArgs {
    std::string snapshot;
    std::string config;
    std::string out;
    std::string warnings;
};

int do_extract(const ExtractArgs& a, std::ostream& out, std::ostream& err) {
    std::map<std::string, SiteExtractionConfig> configs;
    if (!a.config.empty()) configs = load_extraction_config(a.config);
    auto result = extract_snapshot(a.snapshot, configs);
    Corpus corpus(std::move(result.articles));
    fs::path path(a.out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    save_corpus(corpus, path);
    if (!a.warnings.empty()) {
        std::ofstream ws(a.warnings);
        for (const auto& w : result.warnings) ws << w << '\n';
    }
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    out << corpus.size() << " articles, " << result.warnings.size() << " warnings, " << result.failed_posts
        << " failed posts\n";
    if (corpus.empty() && result.failed_posts > 0) return kExitFailure;
    return result.warnings.empty() && result.failed_posts == 0 ? kExitOk : kExitPartial;
}

// ---------------------------------------------------------------- backdate

int do_backdate(const Common& c, std::int64_t grace, std::ostream& out) {
    auto corpus = load_corpus(c.corpus);
    auto flags = detect_backdated(corpus);
    Table t;
    t.header = {"site", "post_id", "language", "claimed", "estimated", "magnitude_days", "class"};
    for (const auto& f : flags) {
        const Article* a = corpus.find({f.site_id, f.post_id});
        t.add({f.site_id, std::to_string(f.post_id), a ? a->language : std::string(), format_utc(f.claimed_date),
               f.estimated_true_date ? format_utc(*f.estimated_true_date) : std::string(),
               f.magnitude_days ? std::to_string(*f.magnitude_days) : std::string(),
               std::string(to_string(classify(f, grace)))});
    }
    auto path = table_path(c, "backdate");
    write_table(path, t, fmt(c));

    Table s;
    s.header = {"language", "total", "flagged", "percent", "mean_magnitude_days", "max_magnitude_days"};
    for (const auto& r : backdate_stats(corpus, flags)) {
        s.add({r.language, std::to_string(r.total), std::to_string(r.flagged), format_double(r.percent),
               opt_str(r.mean_magnitude_days),
               r.max_magnitude_days ? std::to_string(*r.max_magnitude_days) : std::string()});
    }
    auto stats_path = path.parent_path() / (path.stem().string() + "_by_language" + path.extension().string());
    write_table(stats_path, s, fmt(c));
    out << flags.size() << " flagged posts -> " << path.string() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- ngrams

struct NgramArgs {
    std::string site;
    std::string lang = "en";
    std::size_t k = 10;
    std::string exclude_file;
};

int do_ngrams(const Common& c, const NgramArgs& a, std::ostream& out, std::ostream& err) {
    auto corpus = load_corpus(c.corpus);
    auto exclusions = a.exclude_file.empty() ? default_ngram_exclusions() : load_ngram_exclusions(a.exclude_file);
    std::vector<std::string> sites = a.site.empty() ? corpus.sites() : std::vector<std::string>{a.site};
    auto dir = out_dir(c);
    std::size_t files = 0;
    for (const auto& site : sites) {
        for (const auto& table : monthly_tables(corpus, site, a.lang, a.k, exclusions)) {
            Table t;
            t.header = {"rank", "ngram", "n", "count"};
            for (const auto& r : table.rows) {
                t.add({std::to_string(r.rank), join_ngram(r.ngram), std::to_string(r.ngram.size()),
                       std::to_string(r.count)});
            }
            auto name = "ngrams_" + table.site_id + "_" + table.language + "_" + table.month.str() +
                        std::string(extension(fmt(c)));
            write_table(dir / name, t, fmt(c));
            ++files;
        }
    }
    out << files << " monthly tables -> " << dir.string() << '\n';
    if (files == 0) {
        err << "warning: no articles for language '" << a.lang << "'\n";
        return kExitPartial;
    }
    return kExitOk;
}

// ---------------------------------------------------------------- sentences

int do_sentences(const Common& c, const std::string& lang, int min_tokens, std::ostream& out) {
    auto corpus = load_corpus(c.corpus);
    auto sentences = corpus_sentences(corpus, lang, min_tokens);
    fs::path path(c.out);
    if (!path.has_extension()) {
        fs::create_directories(path);
        path /= "sentences.jsonl";
    } else if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    for (const auto& s : sentences) os << json{{"id", s.id()}, {"text", s.text}}.dump() << '\n';
    out << sentences.size() << " sentences -> " << path.string() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- topics

struct TopicArgs {
    std::string emb;
    std::string term_emb;
    std::string lang = "en";
    std::size_t min_cluster_size = 25;
    std::size_t min_samples = 0;
    std::size_t dim = 5;
    std::string reduction = "pca";
    double diversity = 0.5;
    std::size_t top_n = 10;
    std::size_t candidate_pool = 30;
};

int do_topics(const Common& c, const TopicArgs& a, std::ostream& out, std::ostream& err) {
    auto corpus = load_corpus(c.corpus);
    auto sentences = corpus_sentences(corpus, a.lang);
    auto embeddings = load_embeddings(fs::path(a.emb));
    std::optional<EmbeddingMatrix> terms;
    if (!a.term_emb.empty()) terms = load_embeddings(fs::path(a.term_emb));

    TopicParams params;
    params.min_cluster_size = a.min_cluster_size;
    params.min_samples = a.min_samples;
    params.reduced_dim = a.dim;
    params.reduction = a.reduction;
    params.diversity = a.diversity;
    params.top_n = a.top_n;
    params.candidate_pool = a.candidate_pool;
    auto model = fit_topics(sentences, embeddings, params, terms ? &*terms : nullptr);

    auto dir = out_dir(c);
    auto ext = std::string(extension(fmt(c)));

    Table assign;
    assign.header = {"sentence_id", "site", "post_id", "label", "topic"};
    for (std::size_t i = 0; i < model.labels.size(); ++i) {
        int label = model.labels[i];
        auto it = model.topics.find(label);
        assign.add({model.sentence_ids[i], model.sentence_articles[i].site_id,
                    std::to_string(model.sentence_articles[i].post_id), std::to_string(label),
                    it == model.topics.end() ? std::string() : it->second.name});
    }
    write_table(dir / ("assignments" + ext), assign, fmt(c));

    json topics_json;
    topics_json["params"] = {{"min_cluster_size", params.min_cluster_size},
                             {"min_samples", params.min_samples ? params.min_samples : params.min_cluster_size},
                             {"reduced_dim", params.reduced_dim},
                             {"reduction", params.reduction},
                             {"diversity", params.diversity},
                             {"top_n_keywords", params.top_n},
                             {"term_embeddings", terms.has_value()}};
    json clusters = json::array();
    std::size_t outliers = 0;
    for (int l : model.labels) outliers += l == kOutlier;
    for (const auto& [label, info] : model.topics) {
        json kw = json::array();
        for (const auto& [term, w] : info.keywords) kw.push_back({term, w});
        clusters.push_back({{"label", label}, {"size", info.size}, {"name", info.name}, {"keywords", kw}});
    }
    topics_json["clusters"] = clusters;
    topics_json["sentences"] = model.labels.size();
    topics_json["outliers"] = outliers;
    topics_json["warnings"] = model.warnings;
    write_text_file(dir / "topics.json", topics_json.dump(2) + "\n");

    Table topics_table;
    topics_table.header = {"label", "size", "name", "keywords"};
    for (const auto& [label, info] : model.topics) {
        std::string kws;
        for (const auto& [term, w] : info.keywords) kws += (kws.empty() ? "" : "; ") + term;
        topics_table.add({std::to_string(label), std::to_string(info.size), info.name, kws});
    }
    write_table(dir / ("topics" + ext), topics_table, fmt(c));

    auto labels = label_articles(model, &corpus);
    write_table(dir / ("article_labels" + ext), article_labels_table(labels), fmt(c));

    std::set<std::string> candidates;
    for (const auto& [label, pool] : model.candidates) {
        for (const auto& [term, w] : pool) candidates.insert(term);
    }
    std::string cand_text;
    for (const auto& t : candidates) cand_text += t + "\n";
    write_text_file(dir / "candidate_terms.txt", cand_text);

    out << model.topics.size() << " topics, " << outliers << " of " << model.labels.size()
        << " sentences unclustered -> " << dir.string() << '\n';
    for (const auto& w : model.warnings) err << "warning: " << w << '\n';
    return model.warnings.empty() ? kExitOk : kExitPartial;
}

// ---------------------------------------------------------------- lexicon

int do_lexicon(const Common& c, const std::string& lexicon_path, const std::string& lang, std::ostream& out) {
    auto corpus = load_corpus(c.corpus);
    auto lexicon = load_lexicon(lexicon_path);
    CompiledLexicon compiled(lexicon);
    std::vector<DocumentScores> docs;
    std::set<std::string> sites;
    for (const auto& a : corpus) {
        if (!lang.empty() && a.language != lang) continue;
        DocumentScores d{a.key(), a.site_id, score_document(word_tokens(a.text), compiled)};
        if (auto p = punctuation_scores(a.text); p && d.scores) d.scores->insert(p->begin(), p->end());
        docs.push_back(std::move(d));
        sites.insert(a.site_id);
    }
    auto means = group_means(docs);
    std::map<std::string, std::map<std::string, double>> corr;
    for (const auto& s : sites) corr[s] = site_correlation(docs, s);

    std::vector<std::string> categories = compiled.categories();
    if (auto it = means.find("All"); it != means.end()) {
        for (const auto& [cat, v] : it->second) {
            if (std::find(categories.begin(), categories.end(), cat) == categories.end()) categories.push_back(cat);
        }
    }

    Table t;
    t.header = {"category"};
    for (const auto& [group, m] : means) t.header.push_back("mean_" + group);
    for (const auto& s : sites) t.header.push_back("r_pointbiserial_" + s);
    for (const auto& cat : categories) {
        std::vector<std::string> row{cat};
        for (const auto& [group, m] : means) {
            auto it = m.find(cat);
            row.push_back(it == m.end() ? std::string() : format_double(it->second));
        }
        for (const auto& s : sites) {
            auto it = corr[s].find(cat);
            row.push_back(it == corr[s].end() ? std::string() : format_double(it->second));
        }
        t.add(std::move(row));
    }
    for (const auto& var : unavailable_summary_variables()) {
        std::vector<std::string> row{var};
        row.resize(t.header.size(), "NA");
        t.add(std::move(row));
    }
    auto path = table_path(c, "lexicon");
    write_table(path, t, fmt(c));
    out << docs.size() << " documents scored against " << lexicon.categories.size() << " categories -> "
        << path.string() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- cyrillic

int do_cyrillic(const Common& c, const std::string& annotations, std::ostream& out, std::ostream& err) {
    auto corpus = load_corpus(c.corpus);
    std::vector<CyrillicFinding> findings;
    for (const auto& a : corpus) {
        auto f = detect_cyrillic(a);
        findings.insert(findings.end(), f.begin(), f.end());
    }
    std::size_t unmatched = 0;
    if (!annotations.empty()) {
        std::ifstream is(annotations);
        if (!is) throw std::runtime_error("cannot open " + annotations);
        unmatched = apply_annotations(findings, read_cyrillic_annotations(is));
    }
    Table t;
    t.header = {"site", "post_id", "start", "end", "matched", "context", "suggested", "final"};
    for (const auto& f : findings) {
        t.add({f.article.site_id, std::to_string(f.article.post_id), std::to_string(f.start), std::to_string(f.end),
               f.matched, f.context, std::string(to_string(f.suggested)),
               std::string(to_string(f.final_category))});
    }
    auto path = table_path(c, "cyrillic");
    write_table(path, t, fmt(c));

    std::map<std::string, std::size_t> by_category;
    for (const auto& f : findings) ++by_category[std::string(to_string(f.final_category))];
    Table s;
    s.header = {"category", "count"};
    for (const auto& [cat, n] : by_category) s.add({cat, std::to_string(n)});
    write_table(path.parent_path() / (path.stem().string() + "_summary" + path.extension().string()), s, fmt(c));

    out << findings.size() << " Cyrillic spans -> " << path.string() << '\n';
    if (unmatched > 0) {
        err << "warning: " << unmatched << " annotations matched no finding\n";
        return kExitPartial;
    }
    return kExitOk;
}

// ---------------------------------------------------------------- duplicates

int do_duplicates(const Common& c, std::ostream& out) {
    auto corpus = load_corpus(c.corpus);
    auto pairs = find_cross_site_duplicates(corpus);
    Table t;
    t.header = {"site_a", "post_a", "url_a", "site_b", "post_b", "url_b"};
    for (const auto& p : pairs) {
        const Article* a = corpus.find(p.first);
        const Article* b = corpus.find(p.second);
        t.add({p.first.site_id, std::to_string(p.first.post_id), a ? a->url : "", p.second.site_id,
               std::to_string(p.second.post_id), b ? b->url : ""});
    }
    auto path = table_path(c, "duplicates");
    write_table(path, t, fmt(c));
    out << pairs.size() << " cross-site duplicate pairs -> " << path.string() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
    bool exclude_partial = false;
    std::string article_labels;
    std::string holidays;
    std::size_t top_topics = 10;
};

int do_report(const Common& c, const ReportArgs& a, std::ostream& out, std::ostream& err) {
    auto corpus = load_corpus(c.corpus);
    auto dir = out_dir(c);
    auto f = fmt(c);
    auto ext = std::string(extension(f));
    auto sites = corpus.sites();

    auto counts = monthly_counts(corpus, a.exclude_partial);
    write_table(dir / ("monthly_counts" + ext), monthly_table(counts), f);
    auto resolution = resolve_translation_groups(corpus.articles());
    auto group_counts = monthly_group_counts(corpus, resolution.groups, a.exclude_partial);
    write_table(dir / ("monthly_group_counts" + ext), monthly_table(group_counts), f);

    Table weekend;
    weekend.header = {"site", "posts", "publication_share", "modification_share"};
    std::vector<std::string> scopes = sites;
    scopes.push_back("");
    for (const auto& s : scopes) {
        if (auto w = weekend_share(corpus, s)) {
            weekend.add({s.empty() ? "All" : s, std::to_string(w->posts), format_double(w->publication),
                         format_double(w->modification)});
        }
    }
    write_table(dir / ("weekend_share" + ext), weekend, f);

    Table coverage;
    coverage.header = {"groups", "mean_languages", "std_languages", "pct_without_english"};
    if (auto cov = language_coverage(resolution.groups)) {
        coverage.add({std::to_string(cov->groups), format_double(cov->mean_languages),
                      format_double(cov->std_languages), format_double(cov->pct_without_english)});
    }
    write_table(dir / ("language_coverage" + ext), coverage, f);
    write_table(dir / ("translation_groups" + ext), groups_table(resolution.groups), f);
    write_table(dir / ("group_conflicts" + ext), conflicts_table(resolution.reports), f);
    write_table(dir / ("dataset_size" + ext), dataset_size_table(dataset_size(corpus), sites), f);

    std::map<std::string, StackedChart> charts;
    for (const auto& s : sites) {
        if (auto chart = monthly_chart(counts, s)) charts.emplace("monthly_" + s, std::move(*chart));
        if (auto chart = monthly_chart(group_counts, s)) charts.emplace("monthly_groups_" + s, std::move(*chart));
    }
    auto emitted = emit_charts(charts, dir / "charts");
    for (const auto& n : emitted.notices) err << "notice: " << n << '\n';

    if (!a.article_labels.empty()) {
        std::ifstream is(a.article_labels);
        if (!is) throw std::runtime_error("cannot open " + a.article_labels);
        auto labels = read_article_labels(is);
        auto hist = topics_per_article_histogram(labels);
        Table h;
        h.header = {"topics_per_article", "articles"};
        for (const auto& [size, n] : hist.histogram) h.add({std::to_string(size), std::to_string(n)});
        write_table(dir / ("topics_per_article" + ext), h, f);
        Table hs;
        hs.header = {"articles", "mean", "std"};
        hs.add({std::to_string(hist.articles), format_double(hist.mean), format_double(hist.std)});
        write_table(dir / ("topics_per_article_summary" + ext), hs, f);

        std::vector<HolidayRange> holidays;
        if (!a.holidays.empty()) holidays = load_holidays(a.holidays);
        auto weekly = weekly_topic_counts(corpus, labels, a.top_topics);
        write_table(dir / ("weekly_topics" + ext), weekly_topics_table(weekly, holidays), f);
    }

    out << corpus.size() << " articles, " << resolution.groups.size() << " translation groups, "
        << resolution.reports.size() << " conflicts, " << emitted.written.size() << " chart files -> "
        << dir.string() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    std::size_t groups = 60;
    std::uint64_t seed = 1;
    std::string out;
};

int do_synth(const SynthArgs& a, std::ostream& out) {
    static const std::vector<std::string> words = {
        "ukraine",  "russia",    "sanctions", "europe",    "energy",   "gas",     "prices",   "army",
        "fake",     "claims",    "media",     "western",   "official", "report",  "city",     "civilians",
        "aid",      "grain",     "exports",   "bridge",    "missile",  "defense", "election", "minister",
        "protest",  "inflation", "refugees",  "border",    "talks",    "peace",   "nuclear",  "plant"};
    static const std::vector<std::string> sites = {"rrn", "wof"};
    std::mt19937_64 rng(a.seed);
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    auto sentence = [&] {
        std::string s = "The";
        std::size_t len = 5 + pick(8);
        for (std::size_t i = 0; i < len; ++i) s += " " + words[pick(words.size())];
        return s + ".";
    };

    using namespace std::chrono;
    const Timestamp start = sys_days{year{2022} / March / 1};
    std::map<std::string, PostId> next_id = {{"rrn", 100}, {"wof", 100}};
    std::map<std::string, Timestamp> clock = {{"rrn", start}, {"wof", start}};
    std::vector<Article> articles;
    for (std::size_t g = 0; g < a.groups; ++g) {
        const std::string& site = sites[pick(sites.size())];
        std::vector<std::string> langs;
        for (auto l : kLanguages) {
            if (l == "en" ? pick(10) != 0 : pick(2) == 0) langs.emplace_back(l);
        }
        if (langs.empty()) langs.emplace_back("en");
        std::vector<std::string> paragraphs;
        for (std::size_t p = 0, np = 1 + pick(3); p < np; ++p) paragraphs.push_back(sentence() + " " + sentence());
        std::vector<std::size_t> members;
        for (const auto& lang : langs) {
            clock[site] += seconds(3600 + static_cast<long>(pick(36 * 3600)));
            Article art;
            art.site_id = site;
            art.post_id = next_id[site]++;
            art.language = lang;
            art.url = "https://" + site + ".example/" + (lang == "en" ? "" : lang + "/") + "post-" +
                      std::to_string(art.post_id) + "/";
            art.title = "Report " + std::to_string(g);
            art.author_name = "editor";
            art.date_gmt = clock[site];
            // occasional backdating: claimed date pushed into the past
            if (pick(25) == 0) art.date_gmt -= days(1 + pick(20));
            art.modified_gmt = art.date_gmt + hours(pick(48));
            art.date_msk = to_moscow(art.date_gmt);
            art.modified_msk = to_moscow(art.modified_gmt);
            art.paragraphs = paragraphs;
            art.text = join_paragraphs(art.paragraphs);
            members.push_back(articles.size());
            articles.push_back(std::move(art));
        }
        for (std::size_t i : members) {
            for (std::size_t j : members) {
                if (i != j) articles[i].translation_refs.push_back({articles[j].language, articles[j].url});
            }
        }
    }
    Corpus corpus(std::move(articles));
    fs::path path(a.out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    save_corpus(corpus, path);
    out << corpus.size() << " synthetic articles -> " << path.string() << '\n';
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"WordPress news-site forensics toolkit", "wpf"};
    app.require_subcommand(1);

    HarvestArgs harvest;
    auto* h = app.add_subcommand("harvest", "snapshot a WordPress site through its REST API");
    h->add_option("--site", harvest.site, "site base URL")->required();
    h->add_option("--id", harvest.id, "short site key")->required();
    h->add_option("--out", harvest.out, "snapshot root directory")->required();
    h->add_option("--rate", harvest.rate, "max requests per second")->capture_default_str();
    h->add_option("--page-size", harvest.page_size, "posts per listing page")->capture_default_str();
    h->add_option("--max-retries", harvest.max_retries)->capture_default_str();
    h->add_option("--backoff-ms", harvest.backoff_ms)->capture_default_str();
    h->add_option("--concurrency", harvest.concurrency)->capture_default_str();
    h->add_option("--timeout", harvest.timeout, "per-request timeout in seconds")->capture_default_str();
    h->add_option("--user-agent", harvest.user_agent)->capture_default_str();

    ExtractArgs extract;
    auto* e = app.add_subcommand("extract", "extract articles from a snapshot into corpus JSONL");
    e->add_option("--snapshot", extract.snapshot, "snapshot root or site directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    e->add_option("--config", extract.config, "per-site extraction config")->check(CLI::ExistingFile);
    e->add_option("--out", extract.out, "corpus JSONL output")->required();
    e->add_option("--warnings", extract.warnings, "write extraction warnings to this file");

    SynthArgs synth;
    auto* sy = app.add_subcommand("synth", "write a seeded synthetic corpus for testing");
    sy->add_option("--groups", synth.groups, "translation groups to generate")->capture_default_str();
    sy->add_option("--seed", synth.seed)->capture_default_str();
    sy->add_option("--out", synth.out, "corpus JSONL output")->required();

    auto* an = app.add_subcommand("analyze", "run an analysis over a corpus");
    an->require_subcommand(1);

    Common c_back, c_ngr, c_sent, c_top, c_lex, c_cyr, c_dup, c_rep;

    std::int64_t grace = 2;
    auto* ab = an->add_subcommand("backdate", "posts whose ID order contradicts their claimed date");
    add_common(ab, c_back);
    ab->add_option("--grace", grace, "grace period in days")->capture_default_str();

    NgramArgs ngr;
    auto* ang = an->add_subcommand("ngrams", "monthly top-k n-gram tables");
    add_common(ang, c_ngr);
    ang->add_option("--site", ngr.site, "site id (all sites when omitted)");
    ang->add_option("--lang", ngr.lang)->capture_default_str();
    ang->add_option("--k", ngr.k)->capture_default_str();
    ang->add_option("--exclude-file", ngr.exclude_file, "one excluded n-gram per line")->check(CLI::ExistingFile);

    std::string sent_lang = "en";
    int sent_min = 5;
    auto* as = an->add_subcommand("sentences", "filtered sentences as JSONL for the embedder");
    add_common(as, c_sent);
    as->add_option("--lang", sent_lang, "language (all when empty)")->capture_default_str();
    as->add_option("--min-tokens", sent_min)->capture_default_str();

    TopicArgs top;
    auto* at = an->add_subcommand("topics", "sentence clustering and topic keywords");
    add_common(at, c_top);
    at->add_option("--emb", top.emb, "sentence embedding stem (X.json + X.bin)")->required();
    at->add_option("--term-emb", top.term_emb, "candidate term embedding stem");
    at->add_option("--lang", top.lang)->capture_default_str();
    at->add_option("--min-cluster-size", top.min_cluster_size)->capture_default_str();
    at->add_option("--min-samples", top.min_samples, "defaults to min cluster size");
    at->add_option("--dim", top.dim, "reduced dimension")->capture_default_str();
    at->add_option("--reduction", top.reduction)->capture_default_str();
    at->add_option("--diversity", top.diversity)->capture_default_str();
    at->add_option("--top-n", top.top_n)->capture_default_str();
    at->add_option("--candidates", top.candidate_pool)->capture_default_str();

    std::string lexicon_path, lex_lang = "en";
    auto* al = an->add_subcommand("lexicon", "dictionary category scores and site correlations");
    add_common(al, c_lex);
    al->add_option("--lexicon", lexicon_path, "lexicon file (sectioned or .dic)")
        ->required()
        ->check(CLI::ExistingFile);
    al->add_option("--lang", lex_lang, "language (all when empty)")->capture_default_str();

    std::string annotations;
    auto* ac = an->add_subcommand("cyrillic", "Cyrillic spans with suggested categories");
    add_common(ac, c_cyr);
    ac->add_option("--annotations", annotations, "site_id,post_id,start,end,category CSV")
        ->check(CLI::ExistingFile);

    auto* ad = an->add_subcommand("duplicates", "cross-site duplicate articles");
    add_common(ad, c_dup);

    ReportArgs rep;
    auto* ar = an->add_subcommand("report", "temporal, coverage and size tables with charts");
    add_common(ar, c_rep);
    ar->add_flag("--exclude-partial-months", rep.exclude_partial);
    ar->add_option("--article-labels", rep.article_labels, "article_labels.csv from the topics verb")
        ->check(CLI::ExistingFile);
    ar->add_option("--holidays", rep.holidays, "holiday ranges CSV")->check(CLI::ExistingFile);
    ar->add_option("--top-topics", rep.top_topics)->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& ex) {
        int code = app.exit(ex, out, err);
        return code == 0 ? kExitOk : kExitFailure;
    }

    try {
        if (*h) return do_harvest(harvest, out, err);
        if (*e) return do_extract(extract, out, err);
        if (*sy) return do_synth(synth, out);
        if (*ab) return do_backdate(c_back, grace, out);
        if (*ang) return do_ngrams(c_ngr, ngr, out, err);
        if (*as) return do_sentences(c_sent, sent_lang, sent_min, out);
        if (*at) return do_topics(c_top, top, out, err);
        if (*al) return do_lexicon(c_lex, lexicon_path, lex_lang, out);
        if (*ac) return do_cyrillic(c_cyr, annotations, out, err);
        if (*ad) return do_duplicates(c_dup, out);
        if (*ar) return do_report(c_rep, rep, out, err);
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
    return run(args, out, err);
}

}  // namespace wpf::cli
