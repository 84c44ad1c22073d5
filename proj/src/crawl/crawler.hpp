// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "crawl/url.hpp"

namespace tibcorpus::crawl {

struct FetchResult {
    int status = 0;  // 0 = transport failure
    std::string body;
    std::string content_type;
};

/// Injected fetch interface; implementations must be safe to call from
/// multiple threads.
class Fetcher {
public:
    virtual ~Fetcher() = default;
    virtual FetchResult fetch(const std::string& url) = 0;
};

struct CrawlConfig {
    std::uint64_t max_pages = 100000;
    std::uint64_t max_depth = UINT64_MAX;  // unlimited; bounded by max_pages
    std::uint64_t politeness_delay_ms = 0;
    std::uint64_t timeout_ms = 10000;
    std::string user_agent = "tibcorpus-crawler/0.1";
    bool obey_robots = true;
    std::size_t concurrency = 1;
    std::string psl_path;  // empty = bundled snapshot

    void validate() const;
};

struct Page {
    std::string url;  // normalized
    std::uint64_t depth = 0;
    std::string fetched_at;  // ISO 8601 UTC
    int status = 0;
    std::string text;
    std::string seed_root;  // registrable domain of the originating seed
};

/// Parsed robots.txt rules for one user agent.
class RobotsRules {
public:
    static RobotsRules parse(std::string_view body, std::string_view user_agent);
    static RobotsRules allow_all();

    bool allowed(std::string_view path) const;

private:
    struct Rule {
        std::string prefix;
        bool allow = false;
    };
    std::vector<Rule> rules_;
};

/// Breadth-first crawl confined to each seed's registrable domain. Pages are
/// emitted in dispatch order; the dispatch schedule depends only on the link
/// graph, so the fetched set is identical for any concurrency level.
std::vector<Page> crawl(const std::vector<std::string>& seeds, Fetcher& fetcher,
                        const CrawlConfig& config,
                        const std::function<void(const Page&)>& sink = nullptr);

/// HTTP(S) fetcher used by the CLI.
std::unique_ptr<Fetcher> make_http_fetcher(const CrawlConfig& config);

}  // namespace tibcorpus::crawl
