#include "wpf/harvest.hpp"

#include "wpf/extract.hpp"
#include "wpf/text.hpp"
#include "wpf/url.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace wpf {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_redirect(int status) {
    return status == 301 || status == 302 || status == 303 || status == 307 || status == 308;
}

bool is_retriable(int status) { return status == 429 || (status >= 500 && status <= 599); }

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
    };
    std::size_t count = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

std::optional<std::string> read_optional(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_bytes(const fs::path& p, std::string_view bytes) {
    fs::create_directories(p.parent_path());
    auto tmp = p;
    tmp += ".part";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, p);
}

std::string api_root(const SiteConfig& config) {
    std::string base = config.base_url;
    while (!base.empty() && base.back() == '/') base.pop_back();
    return base + "/wp-json/wp/v2/";
}

std::optional<std::int64_t> header_int(const HttpResponse& r, const std::string& name) {
    auto v = r.header(name);
    if (!v) return std::nullopt;
    try {
        return std::stoll(*v);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

bool is_page_overrun(const HttpResponse& r) {
    return r.status == 400 && r.body.find("rest_post_invalid_page_number") != std::string::npos;
}

std::string charset_of(const std::optional<std::string>& content_type) {
    if (!content_type) return {};
    auto c = lower_ascii(*content_type);
    auto pos = c.find("charset=");
    if (pos == std::string::npos) return {};
    auto v = c.substr(pos + 8);
    auto end = v.find_first_of("; ");
    v = v.substr(0, end);
    if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'')) v = v.substr(1, v.size() - 2);
    return v;
}

/// Fetches every page of a paginated collection endpoint and returns the
/// raw element bytes in API order.
struct Collection {
    std::vector<std::string> items;
    std::optional<std::int64_t> total;
    std::int64_t pages = 0;
    std::size_t requests = 0;
    std::vector<FetchFailure> failures;
};

Collection fetch_collection(const std::string& endpoint, int per_page, int concurrency, Fetcher& fetcher) {
    Collection out;
    auto page_url = [&](std::int64_t page) {
        return endpoint + "?per_page=" + std::to_string(per_page) + "&page=" + std::to_string(page);
    };
    auto parse_page = [&](const Fetcher::Result& r, std::vector<std::string>& items) -> bool {
        if (r.failure) return false;
        try {
            for (auto sv : split_json_array(r.response->body)) items.emplace_back(sv);
        } catch (const RawPostError& e) {
            out.failures.push_back({r.final_url, FailureKind::Permanent, e.what()});
            return false;
        }
        return true;
    };

    auto first = fetcher.get(page_url(1));
    ++out.requests;
    if (first.failure) {
        out.failures.push_back(*first.failure);
        return out;
    }
    out.total = header_int(*first.response, "x-wp-total");
    out.pages = header_int(*first.response, "x-wp-totalpages").value_or(1);
    std::vector<std::vector<std::string>> pages(static_cast<std::size_t>(std::max<std::int64_t>(out.pages, 1)));
    parse_page(first, pages[0]);

    std::mutex mutex;
    parallel_for(pages.size() - 1, concurrency, [&](std::size_t i) {
        auto r = fetcher.get(page_url(static_cast<std::int64_t>(i) + 2));
        std::lock_guard lock(mutex);
        ++out.requests;
        if (r.response && is_page_overrun(*r.response)) return;
        if (r.failure) {
            out.failures.push_back(*r.failure);
            return;
        }
        parse_page(r, pages[i + 1]);
    });
    for (auto& p : pages) {
        for (auto& item : p) out.items.push_back(std::move(item));
    }
    return out;
}

class HttplibTransport : public HttpTransport {
public:
    HttpResponse get(const std::string& url, const std::string& user_agent, int timeout_seconds) override {
        auto u = parse_url(url);
        if (!u) throw TransportError("not an absolute http(s) URL: " + url);
        httplib::Client client(u->origin());
        client.set_follow_location(false);
        client.set_connection_timeout(timeout_seconds, 0);
        client.set_read_timeout(timeout_seconds, 0);
        client.set_write_timeout(timeout_seconds, 0);
        httplib::Headers headers{{"User-Agent", user_agent}, {"Accept", "*/*"}};
        auto res = client.Get(u->path_and_query(), headers);
        if (!res) throw TransportError(httplib::to_string(res.error()));
        HttpResponse out;
        out.status = res->status;
        out.body = std::move(res->body);
        for (const auto& [k, v] : res->headers) out.headers[lower_ascii(k)] = v;
        return out;
    }
};

}  // namespace

// ---------------------------------------------------------------- config

void SiteConfig::validate() const {
    if (site_id.empty()) throw std::invalid_argument("site_id must not be empty");
    if (site_id.find_first_of("/\\") != std::string::npos || site_id == "." || site_id == "..") {
        throw std::invalid_argument("site_id must be a plain directory name");
    }
    if (!parse_url(base_url)) throw std::invalid_argument("base_url must be an absolute http(s) URL");
    if (page_size < 1 || page_size > 100) throw std::invalid_argument("page_size must be in 1..100");
    if (!(rate_limit > 0) || !std::isfinite(rate_limit)) throw std::invalid_argument("rate_limit must be positive");
    if (retry_policy.max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
    if (retry_policy.backoff_base_ms <= 0) throw std::invalid_argument("backoff_base_ms must be > 0");
    if (concurrency < 1) throw std::invalid_argument("concurrency must be >= 1");
    if (timeout_seconds < 1) throw std::invalid_argument("timeout_seconds must be >= 1");
    if (max_redirects < 0) throw std::invalid_argument("max_redirects must be >= 0");
}

std::optional<std::string> HttpResponse::header(const std::string& name) const {
    auto it = headers.find(name);
    if (it == headers.end()) return std::nullopt;
    return it->second;
}

std::unique_ptr<HttpTransport> make_http_transport() { return std::make_unique<HttplibTransport>(); }

// ---------------------------------------------------------------- limiter

RateLimiter::RateLimiter(double rps)
    : interval_(std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(1.0 / rps))) {
    if (!(rps > 0)) throw std::invalid_argument("rate must be positive");
}

void RateLimiter::acquire() {
    Clock::time_point slot;
    {
        std::lock_guard lock(mutex_);
        auto now = Clock::now();
        slot = std::max(now, next_);
        next_ = slot + interval_;
        grants_.push_back(slot);
    }
    std::this_thread::sleep_until(slot);
}

std::vector<RateLimiter::Clock::time_point> RateLimiter::grants() const {
    std::lock_guard lock(mutex_);
    return grants_;
}

// ---------------------------------------------------------------- fetcher

std::string_view to_string(FailureKind kind) { return kind == FailureKind::Retriable ? "retriable" : "permanent"; }

Fetcher::Fetcher(const SiteConfig& config, HttpTransport& transport)
    : config_(config), transport_(transport), limiter_(config.rate_limit),
      sleep_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {}

FetchStats Fetcher::stats() const {
    std::lock_guard lock(mutex_);
    return stats_;
}

Fetcher::Result Fetcher::get(const std::string& url) {
    Result out;
    std::string current = url;
    int redirects = 0;
    int attempt = 0;
    while (true) {
        limiter_.acquire();
        {
            std::lock_guard lock(mutex_);
            ++stats_.requests;
        }
        std::optional<HttpResponse> resp;
        std::string error;
        try {
            resp = transport_.get(current, config_.user_agent, config_.timeout_seconds);
        } catch (const TransportError& e) {
            error = e.what();
        }
        out.final_url = current;

        if (resp && is_redirect(resp->status)) {
            auto location = resp->header("location");
            if (!location) {
                out.failure = FetchFailure{url, FailureKind::Permanent, "redirect without Location"};
                out.response = std::move(resp);
                return out;
            }
            if (++redirects > config_.max_redirects) {
                out.failure = FetchFailure{url, FailureKind::Permanent, "too many redirects"};
                return out;
            }
            current = resolve_url(current, *location);
            continue;
        }

        bool retriable = !resp || is_retriable(resp->status);
        if (!retriable) {
            if (resp->status >= 400) {
                out.failure = FetchFailure{url, FailureKind::Permanent, "HTTP " + std::to_string(resp->status)};
            }
            out.response = std::move(resp);
            return out;
        }
        std::string detail = resp ? "HTTP " + std::to_string(resp->status) : "network: " + error;
        if (attempt >= config_.retry_policy.max_retries) {
            out.failure = FetchFailure{url, FailureKind::Retriable, detail + " after " + std::to_string(attempt) + " retries"};
            return out;
        }
        auto wait = std::chrono::milliseconds(static_cast<std::int64_t>(config_.retry_policy.backoff_base_ms) << attempt);
        if (resp) {
            if (auto ra = header_int(*resp, "retry-after")) {
                auto hinted = std::chrono::milliseconds(std::clamp<std::int64_t>(*ra, 0, 120) * 1000);
                wait = std::max(wait, hinted);
            }
        }
        ++attempt;
        {
            std::lock_guard lock(mutex_);
            ++stats_.retries;
        }
        sleep_(wait);
    }
}

// ---------------------------------------------------------------- listing

PostListing list_posts(const SiteConfig& config, Fetcher& fetcher) {
    config.validate();
    PostListing out;
    auto coll = fetch_collection(api_root(config) + "posts", config.page_size, config.concurrency, fetcher);
    out.advertised_total = coll.total;
    out.total_pages = coll.pages;
    out.list_requests = coll.requests;
    out.failures = std::move(coll.failures);
    std::set<PostId> seen;
    for (const auto& item : coll.items) {
        try {
            auto p = parse_raw_post(item);
            if (!seen.insert(p.id).second) {
                out.warnings.push_back("post " + std::to_string(p.id) + " listed twice");
                continue;
            }
            out.posts.push_back(std::move(p));
        } catch (const RawPostError& e) {
            out.warnings.push_back(std::string("unparseable post: ") + e.what());
        }
    }
    if (out.advertised_total && static_cast<std::int64_t>(out.posts.size()) != *out.advertised_total) {
        out.warnings.push_back("listed " + std::to_string(out.posts.size()) + " posts, X-WP-Total " +
                               std::to_string(*out.advertised_total));
    }
    return out;
}

PageFetch fetch_page_html(const std::string& url, Fetcher& fetcher) {
    PageFetch out;
    out.url = url;
    auto r = fetcher.get(url);
    out.final_url = r.final_url;
    if (r.response) out.status = r.response->status;
    if (r.failure) {
        out.failure = r.failure;
        return out;
    }
    out.body = std::move(r.response->body);
    out.charset = charset_of(r.response->header("content-type"));
    if (out.charset.empty()) out.charset = sniff_charset(out.body).value_or("");
    return out;
}

// ---------------------------------------------------------------- manifest

void write_manifest(const fs::path& path, const SnapshotManifest& m) {
    ordered_json j;
    j["site_id"] = m.site_id;
    j["base_url"] = m.base_url;
    j["fetched_at"] = format_utc(m.fetched_at);
    j["post_count"] = m.post_count;
    j["page_html_count"] = m.page_html_count;
    j["advertised_total"] = m.advertised_total ? ordered_json(*m.advertised_total) : ordered_json(nullptr);
    j["requests"] = m.requests;
    j["retries"] = m.retries;
    j["list_requests"] = m.list_requests;
    j["page_fetches"] = m.page_fetches;
    j["files_written"] = m.files_written;
    j["failures"] = ordered_json::array();
    for (const auto& f : m.failures) {
        j["failures"].push_back({{"url", f.url}, {"kind", to_string(f.kind)}, {"detail", f.detail}});
    }
    j["pages"] = ordered_json::array();
    for (const auto& p : m.pages) {
        j["pages"].push_back({{"post_id", p.post_id}, {"url", p.url}, {"final_url", p.final_url}, {"charset", p.charset}});
    }
    j["checksums"] = ordered_json::object();
    for (const auto& [k, v] : m.checksums) j["checksums"][k] = v;
    write_bytes(path, j.dump(2) + "\n");
}

SnapshotManifest read_manifest(const fs::path& path) {
    auto bytes = read_optional(path);
    if (!bytes) throw std::runtime_error("cannot open " + path.string());
    auto j = nlohmann::json::parse(*bytes);
    SnapshotManifest m;
    m.site_id = j.at("site_id").get<std::string>();
    m.base_url = j.value("base_url", "");
    m.fetched_at = parse_timestamp(j.at("fetched_at").get<std::string>());
    m.post_count = j.value("post_count", std::size_t{0});
    m.page_html_count = j.value("page_html_count", std::size_t{0});
    if (j.contains("advertised_total") && j["advertised_total"].is_number()) {
        m.advertised_total = j["advertised_total"].get<std::int64_t>();
    }
    m.requests = j.value("requests", std::size_t{0});
    m.retries = j.value("retries", std::size_t{0});
    m.list_requests = j.value("list_requests", std::size_t{0});
    m.page_fetches = j.value("page_fetches", std::size_t{0});
    m.files_written = j.value("files_written", std::size_t{0});
    for (const auto& f : j.value("failures", nlohmann::json::array())) {
        auto kind = f.at("kind").get<std::string>();
        if (kind != "retriable" && kind != "permanent") throw std::runtime_error("bad failure kind " + kind);
        m.failures.push_back({f.at("url").get<std::string>(),
                              kind == "retriable" ? FailureKind::Retriable : FailureKind::Permanent,
                              f.value("detail", "")});
    }
    for (const auto& p : j.value("pages", nlohmann::json::array())) {
        m.pages.push_back({p.at("post_id").get<std::int64_t>(), p.value("url", ""), p.value("final_url", ""),
                           p.value("charset", "")});
    }
    auto checksums = j.value("checksums", nlohmann::json::object());
    for (const auto& [k, v] : checksums.items()) m.checksums[k] = v.get<std::string>();
    return m;
}

// ---------------------------------------------------------------- snapshot

SnapshotManifest snapshot(const SiteConfig& config, const fs::path& out_dir, HttpTransport& transport) {
    config.validate();
    const fs::path dir = out_dir / config.site_id;
    fs::create_directories(dir / "posts");
    fs::create_directories(dir / "pages");
    fs::create_directories(dir / "meta");

    std::optional<SnapshotManifest> previous;
    if (fs::exists(dir / "manifest.json")) {
        try {
            previous = read_manifest(dir / "manifest.json");
        } catch (const std::exception&) {
            previous.reset();
        }
    }
    std::map<std::int64_t, PageRecord> previous_pages;
    if (previous) {
        for (const auto& p : previous->pages) previous_pages[p.post_id] = p;
    }

    Fetcher fetcher(config, transport);
    SnapshotManifest m;
    m.site_id = config.site_id;
    m.base_url = config.base_url;
    std::mutex mutex;

    auto store = [&](const std::string& rel, std::string_view bytes) {
        auto sum = text::sha256_hex(bytes);
        auto path = dir / rel;
        bool same = false;
        if (auto existing = read_optional(path)) same = text::sha256_hex(*existing) == sum;
        if (!same) write_bytes(path, bytes);
        std::lock_guard lock(mutex);
        m.checksums[rel] = sum;
        if (!same) ++m.files_written;
    };
    auto stored_matches = [&](const std::string& rel) {
        if (!previous) return false;
        auto it = previous->checksums.find(rel);
        if (it == previous->checksums.end()) return false;
        auto existing = read_optional(dir / rel);
        return existing && text::sha256_hex(*existing) == it->second;
    };

    auto listing = list_posts(config, fetcher);
    m.advertised_total = listing.advertised_total;
    m.list_requests = listing.list_requests;
    m.failures = listing.failures;
    for (const auto& p : listing.posts) store("posts/" + std::to_string(p.id) + ".json", p.raw_json);

    parallel_for(listing.posts.size(), config.concurrency, [&](std::size_t i) {
        const RawPost& p = listing.posts[i];
        std::string rel = "pages/" + std::to_string(p.id) + ".html";
        if (stored_matches(rel) && previous_pages.contains(p.id)) {
            std::lock_guard lock(mutex);
            m.checksums[rel] = previous->checksums.at(rel);
            m.pages.push_back(previous_pages.at(p.id));
            return;
        }
        auto page = fetch_page_html(p.link, fetcher);
        {
            std::lock_guard lock(mutex);
            ++m.page_fetches;
            if (page.failure) {
                m.failures.push_back(*page.failure);
                return;
            }
            m.pages.push_back({p.id, page.url, page.final_url, page.charset});
        }
        store(rel, page.body);
    });

    for (const char* name : {"users", "categories", "tags"}) {
        auto coll = fetch_collection(api_root(config) + name, 100, config.concurrency, fetcher);
        m.failures.insert(m.failures.end(), coll.failures.begin(), coll.failures.end());
        if (!coll.failures.empty() && coll.items.empty()) continue;
        std::string bytes = "[";
        for (std::size_t i = 0; i < coll.items.size(); ++i) bytes += (i ? ",\n" : "\n") + coll.items[i];
        bytes += coll.items.empty() ? "]\n" : "\n]\n";
        store(std::string("meta/") + name + ".json", bytes);
    }

    std::sort(m.pages.begin(), m.pages.end(), [](const PageRecord& a, const PageRecord& b) { return a.post_id < b.post_id; });
    std::sort(m.failures.begin(), m.failures.end(), [](const FetchFailure& a, const FetchFailure& b) { return a.url < b.url; });
    for (const auto& entry : fs::directory_iterator(dir / "posts")) {
        if (entry.path().extension() == ".json") ++m.post_count;
    }
    for (const auto& entry : fs::directory_iterator(dir / "pages")) {
        if (entry.path().extension() == ".html") ++m.page_html_count;
    }
    auto stats = fetcher.stats();
    m.requests = stats.requests;
    m.retries = stats.retries;
    m.fetched_at = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    write_manifest(dir / "manifest.json", m);
    return m;
}

}  // namespace wpf
