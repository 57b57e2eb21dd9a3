#include "wpf/topics.hpp"

#include "wpf/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace wpf {

std::vector<Sentence> filter_sentences(const std::vector<Sentence>& sentences, int min_tokens) {
    std::vector<Sentence> out;
    for (const auto& s : sentences) {
        if (s.token_count >= min_tokens) out.push_back(s);
    }
    return out;
}

std::vector<Sentence> corpus_sentences(const Corpus& corpus, const std::string& language, int min_tokens) {
    std::vector<Sentence> out;
    for (const auto& a : corpus) {
        if (!language.empty() && a.language != language) continue;
        for (auto& s : filter_sentences(article_sentences(a), min_tokens)) out.push_back(std::move(s));
    }
    return out;
}

std::vector<std::string> topic_terms(std::string_view sentence) {
    auto tokens = tokenize(sentence, TokenMode::Analysis);
    std::vector<std::string> terms = tokens;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) terms.push_back(tokens[i] + " " + tokens[i + 1]);
    return terms;
}

double CtfidfResult::weight(int label, const std::string& term) const {
    auto it = keywords.find(label);
    if (it == keywords.end()) return 0.0;
    for (const auto& [t, w] : it->second) {
        if (t == term) return w;
    }
    return 0.0;
}

CtfidfResult ctfidf(const std::map<int, std::vector<std::string>>& class_terms) {
    CtfidfResult result;
    std::map<int, std::map<std::string, double>> counts;
    std::map<std::string, double> total_of_term;
    double total = 0.0;
    for (const auto& [label, terms] : class_terms) {
        auto& c = counts[label];
        for (const auto& t : terms) {
            c[t] += 1.0;
            total_of_term[t] += 1.0;
        }
        total += static_cast<double>(terms.size());
    }
    if (class_terms.empty()) return result;
    const double avg = total / static_cast<double>(class_terms.size());

    for (const auto& [label, c] : counts) {
        auto& out = result.keywords[label];
        double class_total = static_cast<double>(class_terms.at(label).size());
        if (class_total == 0.0) {
            result.warnings.push_back("topic " + std::to_string(label) + " has no terms");
            continue;
        }
        for (const auto& [term, count] : c) {
            double idf = std::log(1.0 + avg / total_of_term.at(term));
            out.emplace_back(term, count / class_total * idf);
        }
        std::sort(out.begin(), out.end(), [](const WeightedTerm& a, const WeightedTerm& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
    }
    return result;
}

namespace {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

bool is_zero(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

MmrResult mmr_diversify(const std::vector<std::string>& candidates,
                        const std::vector<std::vector<double>>& candidate_vectors,
                        const std::vector<double>& topic_vector, double diversity, std::size_t top_n) {
    if (candidates.size() != candidate_vectors.size()) {
        throw std::invalid_argument("one vector per candidate is required");
    }
    for (const auto& v : candidate_vectors) {
        if (v.size() != topic_vector.size()) throw std::invalid_argument("vector dimensions disagree");
    }
    MmrResult result;
    if (is_zero(topic_vector)) result.warnings.push_back("topic vector is zero");
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (is_zero(candidate_vectors[i])) result.warnings.push_back("zero vector for term '" + candidates[i] + "'");
    }

    const std::size_t n = candidates.size();
    std::vector<double> relevance(n);
    for (std::size_t i = 0; i < n; ++i) relevance[i] = cosine(candidate_vectors[i], topic_vector);
    std::vector<double> redundancy(n, -std::numeric_limits<double>::infinity());
    std::vector<bool> picked(n, false);
    const std::size_t want = std::min(top_n, n);
    for (std::size_t step = 0; step < want; ++step) {
        std::size_t best = n;
        double best_score = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (picked[i]) continue;
            double score = step == 0 ? relevance[i] : (1.0 - diversity) * relevance[i] - diversity * redundancy[i];
            if (best == n || score > best_score) {
                best = i;
                best_score = score;
            }
        }
        picked[best] = true;
        result.terms.push_back(candidates[best]);
        for (std::size_t i = 0; i < n; ++i) {
            if (!picked[i]) redundancy[i] = std::max(redundancy[i], cosine(candidate_vectors[i], candidate_vectors[best]));
        }
    }
    return result;
}

std::string topic_name(const std::vector<WeightedTerm>& keywords) {
    std::string out;
    for (std::size_t i = 0; i < keywords.size() && i < 3; ++i) {
        if (i) out += ", ";
        out += keywords[i].first;
    }
    return out;
}

TopicModel fit_topics(const std::vector<Sentence>& sentences, const EmbeddingMatrix& embeddings,
                      const TopicParams& params, const EmbeddingMatrix* term_embeddings) {
    TopicModel model;
    model.params = params;

    std::unordered_map<std::string, const Sentence*> by_id;
    for (const auto& s : sentences) by_id.emplace(s.id(), &s);
    std::vector<const Sentence*> rows;
    for (const auto& id : embeddings.ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw std::invalid_argument("embedding id '" + id + "' matches no sentence");
        rows.push_back(it->second);
        model.sentence_ids.push_back(id);
        model.sentence_articles.push_back(it->second->article);
    }
    if (rows.size() < sentences.size()) {
        model.warnings.push_back(std::to_string(sentences.size() - rows.size()) +
                                 " sentences have no embedding and were skipped");
    }

    Matrix full = embeddings.to_matrix();
    Matrix reduced = full;
    if (params.reduced_dim > 0 && params.reduced_dim < embeddings.dim && full.rows > 0) {
        auto reduction = make_reducer(params.reduction)->reduce(full, params.reduced_dim);
        reduced = std::move(reduction.projected);
        for (auto& w : reduction.warnings) model.warnings.push_back(std::move(w));
    }

    auto clusters = hdbscan(reduced, {params.min_cluster_size, params.min_samples});
    model.labels = clusters.labels;

    std::map<int, std::vector<std::string>> class_terms;
    std::map<int, std::size_t> sizes;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        int label = model.labels[i];
        if (label == kOutlier) continue;
        ++sizes[label];
        auto terms = topic_terms(rows[i]->text);
        auto& bucket = class_terms[label];
        bucket.insert(bucket.end(), terms.begin(), terms.end());
    }
    auto weights = ctfidf(class_terms);
    for (auto& w : weights.warnings) model.warnings.push_back(std::move(w));

    std::unordered_map<std::string, std::size_t> term_row;
    if (term_embeddings) {
        if (term_embeddings->dim != embeddings.dim) {
            throw std::invalid_argument("term embeddings and sentence embeddings differ in dimension");
        }
        for (std::size_t i = 0; i < term_embeddings->count(); ++i) term_row.emplace(term_embeddings->ids[i], i);
    }

    for (const auto& [label, size] : sizes) {
        TopicInfo info;
        info.label = label;
        info.size = size;
        std::vector<WeightedTerm> pool = weights.keywords[label];
        if (pool.size() > params.candidate_pool) pool.resize(params.candidate_pool);
        model.candidates[label] = pool;

        if (!term_embeddings) {
            info.keywords.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(std::min(pool.size(), params.top_n)));
        } else {
            std::vector<double> topic_vec(embeddings.dim, 0.0);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (model.labels[i] != label) continue;
                for (std::size_t j = 0; j < embeddings.dim; ++j) topic_vec[j] += full(i, j);
            }
            for (double& v : topic_vec) v /= static_cast<double>(size);

            std::vector<std::string> names;
            std::vector<std::vector<double>> vecs;
            std::map<std::string, double> weight_of;
            for (const auto& [term, w] : pool) {
                auto it = term_row.find(term);
                if (it == term_row.end()) {
                    model.warnings.push_back("no embedding for term '" + term + "'");
                    continue;
                }
                auto r = term_embeddings->row(it->second);
                names.push_back(term);
                vecs.emplace_back(r.begin(), r.end());
                weight_of[term] = w;
            }
            auto picked = mmr_diversify(names, vecs, topic_vec, params.diversity, params.top_n);
            for (auto& w : picked.warnings) model.warnings.push_back(std::move(w));
            for (const auto& t : picked.terms) info.keywords.emplace_back(t, weight_of.at(t));
        }
        info.name = topic_name(info.keywords);
        model.topics.emplace(label, std::move(info));
    }
    return model;
}

std::map<ArticleKey, std::set<int>> label_articles(const TopicModel& model, const Corpus* corpus) {
    std::map<ArticleKey, std::set<int>> out;
    if (corpus) {
        for (const auto& a : *corpus) out[a.key()];
    }
    for (std::size_t i = 0; i < model.labels.size(); ++i) {
        auto& set = out[model.sentence_articles[i]];
        if (model.labels[i] != kOutlier) set.insert(model.labels[i]);
    }
    return out;
}

}  // namespace wpf
