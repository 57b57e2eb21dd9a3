#pragma once

#include "wpf/rawpost.hpp"
#include "wpf/time.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpf {

struct RetryPolicy {
    int max_retries = 3;
    int backoff_base_ms = 500;
};

struct SiteConfig {
    std::string site_id;
    std::string base_url;
    int page_size = 100;
    double rate_limit = 2.0;  // requests per second
    std::string user_agent = "wpforensics/0.1";
    RetryPolicy retry_policy;
    int concurrency = 4;
    int timeout_seconds = 30;
    int max_redirects = 5;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

// ---------------------------------------------------------------- transport

struct HttpResponse {
    int status = 0;
    std::map<std::string, std::string> headers;  // keys lowercase
    std::string body;

    std::optional<std::string> header(const std::string& lowercase_name) const;
};

/// Raised for connection-level failures (refused, timeout, reset).
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    /// One GET without following redirects. Thread-safe.
    virtual HttpResponse get(const std::string& url, const std::string& user_agent, int timeout_seconds) = 0;
};

/// cpp-httplib client for http and https.
std::unique_ptr<HttpTransport> make_http_transport();

/// Fixed-interval limiter shared by all workers: grants are at least
/// 1/rate seconds apart.
class RateLimiter {
public:
    using Clock = std::chrono::steady_clock;

    explicit RateLimiter(double requests_per_second);
    void acquire();
    std::vector<Clock::time_point> grants() const;

private:
    Clock::duration interval_;
    mutable std::mutex mutex_;
    Clock::time_point next_{};
    std::vector<Clock::time_point> grants_;
};

// ---------------------------------------------------------------- fetching

enum class FailureKind { Retriable, Permanent };
std::string_view to_string(FailureKind kind);

struct FetchFailure {
    std::string url;
    FailureKind kind = FailureKind::Permanent;
    std::string detail;
};

struct FetchStats {
    std::size_t requests = 0;
    std::size_t retries = 0;
};

/// Performs requests with pacing, retries and manual redirects.
class Fetcher {
public:
    Fetcher(const SiteConfig& config, HttpTransport& transport);

    struct Result {
        std::optional<HttpResponse> response;  // set on a final 2xx or non-retriable status
        std::string final_url;
        std::optional<FetchFailure> failure;
    };

    /// Retries connection errors, 429 and 5xx with exponential backoff
    /// (base * 2^attempt, or Retry-After when larger). Follows 301, 302,
    /// 303, 307 and 308. Any other status >= 400 is a permanent failure;
    /// the response is still returned so callers can inspect it.
    Result get(const std::string& url);

    FetchStats stats() const;
    const RateLimiter& limiter() const { return limiter_; }
    /// Replaces sleeping during backoff, for tests.
    void set_sleeper(std::function<void(std::chrono::milliseconds)> sleeper) { sleep_ = std::move(sleeper); }

private:
    const SiteConfig& config_;
    HttpTransport& transport_;
    RateLimiter limiter_;
    std::function<void(std::chrono::milliseconds)> sleep_;
    mutable std::mutex mutex_;
    FetchStats stats_;
};

struct PostListing {
    std::vector<RawPost> posts;  // API order, duplicates removed
    std::optional<std::int64_t> advertised_total;
    std::int64_t total_pages = 0;
    std::size_t list_requests = 0;
    std::vector<FetchFailure> failures;
    std::vector<std::string> warnings;
};

/// Every post of the site, paginated by X-WP-TotalPages.
PostListing list_posts(const SiteConfig& config, Fetcher& fetcher);

struct PageFetch {
    std::string url;
    std::string final_url;
    int status = 0;
    std::string body;
    std::string charset;  // from Content-Type, else <meta>, else empty
    std::optional<FetchFailure> failure;
};

PageFetch fetch_page_html(const std::string& url, Fetcher& fetcher);

// ---------------------------------------------------------------- snapshots

struct PageRecord {
    std::int64_t post_id = 0;
    std::string url;
    std::string final_url;
    std::string charset;
};

struct SnapshotManifest {
    std::string site_id;
    std::string base_url;
    Timestamp fetched_at{};
    std::size_t post_count = 0;
    std::size_t page_html_count = 0;
    std::optional<std::int64_t> advertised_total;
    std::size_t requests = 0;
    std::size_t retries = 0;
    std::size_t list_requests = 0;
    std::size_t page_fetches = 0;
    std::size_t files_written = 0;
    std::vector<FetchFailure> failures;
    std::vector<PageRecord> pages;
    std::map<std::string, std::string> checksums;  // relative path -> sha256

    bool complete() const { return failures.empty(); }
};

void write_manifest(const std::filesystem::path& path, const SnapshotManifest& manifest);
SnapshotManifest read_manifest(const std::filesystem::path& path);

/// Harvests into `out_dir/<site_id>/`: posts/<id>.json (verbatim payload
/// bytes), pages/<id>.html, meta/{users,categories,tags}.json and
/// manifest.json. Files whose stored checksum matches are neither
/// rewritten nor refetched.
SnapshotManifest snapshot(const SiteConfig& config, const std::filesystem::path& out_dir, HttpTransport& transport);

}  // namespace wpf
