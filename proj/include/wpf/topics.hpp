#pragma once

#include "wpf/corpus.hpp"
#include "wpf/embeddings.hpp"
#include "wpf/hdbscan.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace wpf {

using WeightedTerm = std::pair<std::string, double>;

/// Keeps sentences with at least min_tokens raw tokens.
std::vector<Sentence> filter_sentences(const std::vector<Sentence>& sentences, int min_tokens = 5);

/// Sentences of the corpus articles in `language` (all languages when empty),
/// filtered by token count, with article keys set.
std::vector<Sentence> corpus_sentences(const Corpus& corpus, const std::string& language = "en",
                                       int min_tokens = 5);

/// Unigrams and bigrams of a sentence's analysis tokens; bigrams are joined
/// with one space and never span sentences.
std::vector<std::string> topic_terms(std::string_view sentence);

struct CtfidfResult {
    std::map<int, std::vector<WeightedTerm>> keywords;  // weight descending, then term
    std::vector<std::string> warnings;

    /// 0 when the term does not occur in the class.
    double weight(int label, const std::string& term) const;
};

/// Class-based TF-IDF: tf(t, c) = count(t, c) / total(c);
/// idf(t) = log(1 + A / f_t) with A the mean total term count per class and
/// f_t the count of t over all classes; weight = tf * idf.
CtfidfResult ctfidf(const std::map<int, std::vector<std::string>>& class_terms);

struct MmrResult {
    std::vector<std::string> terms;
    std::vector<std::string> warnings;
};

/// Maximal marginal relevance. The first pick maximizes cosine similarity
/// to the topic; each later pick maximizes
/// (1 - diversity) * cos(term, topic) - diversity * max cos(term, picked).
/// Ties go to the earlier candidate. Zero vectors have cosine 0.
/// Throws std::invalid_argument when vector dimensions disagree.
MmrResult mmr_diversify(const std::vector<std::string>& candidates,
                        const std::vector<std::vector<double>>& candidate_vectors,
                        const std::vector<double>& topic_vector, double diversity = 0.5, std::size_t top_n = 10);

struct TopicParams {
    std::size_t min_cluster_size = 25;
    std::size_t min_samples = 0;
    std::size_t reduced_dim = 5;
    std::string reduction = "pca";
    double diversity = 0.5;
    std::size_t top_n = 10;
    std::size_t candidate_pool = 30;
};

struct TopicInfo {
    int label = kOutlier;
    std::size_t size = 0;
    std::vector<WeightedTerm> keywords;  // final order; weights are c-TF-IDF
    std::string name;
};

struct TopicModel {
    TopicParams params;
    std::vector<std::string> sentence_ids;  // embedding row order
    std::vector<ArticleKey> sentence_articles;
    std::vector<int> labels;                // per sentence
    std::map<int, TopicInfo> topics;
    /// c-TF-IDF candidates per topic, before diversification.
    std::map<int, std::vector<WeightedTerm>> candidates;
    std::vector<std::string> warnings;
};

/// First three keywords joined by ", ".
std::string topic_name(const std::vector<WeightedTerm>& keywords);

/// Full pipeline over sentences with precomputed embeddings. Every embedding
/// id must name one of the sentences (Sentence::id()); sentences without an
/// embedding are skipped with a warning. When term_embeddings is given,
/// keywords are diversified with MMR against the mean sentence embedding of
/// the topic; otherwise they are the top c-TF-IDF terms.
/// Throws std::invalid_argument on unknown embedding ids.
TopicModel fit_topics(const std::vector<Sentence>& sentences, const EmbeddingMatrix& embeddings,
                      const TopicParams& params = {}, const EmbeddingMatrix* term_embeddings = nullptr);

/// Distinct non-outlier labels of each article's sentences. Articles of
/// `corpus` without any labelled sentence map to the empty set.
std::map<ArticleKey, std::set<int>> label_articles(const TopicModel& model, const Corpus* corpus = nullptr);

}  // namespace wpf
