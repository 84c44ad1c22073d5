// SPDX-License-Identifier: Apache-2.0
#include "crawl/crawler.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "common/errors.hpp"
#include "common/parallel.hpp"
#include "common/utf8.hpp"
#include "crawl/html.hpp"

namespace tibcorpus::crawl {

void CrawlConfig::validate() const {
    if (max_pages < 1) {
        throw ConfigError("crawl: max_pages must be >= 1");
    }
    if (concurrency < 1) {
        throw ConfigError("crawl: concurrency must be >= 1");
    }
}

RobotsRules RobotsRules::allow_all() { return RobotsRules{}; }

RobotsRules RobotsRules::parse(std::string_view body, std::string_view user_agent) {
    // Collect the group(s) whose User-agent matches us, preferring exact
    // product-token matches over "*".
    RobotsRules specific;
    RobotsRules wildcard;
    bool in_group = false;
    bool group_specific = false;
    bool group_matches = false;
    bool have_specific = false;

    const std::string ua_lower = [&] {
        std::string s(user_agent);
        std::transform(s.begin(), s.end(), s.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return s;
    }();

    std::size_t start = 0;
    for (std::size_t i = 0; i <= body.size(); ++i) {
        if (i != body.size() && body[i] != '\n') {
            continue;
        }
        std::string_view line = body.substr(start, i - start);
        start = i + 1;
        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
            line.remove_suffix(1);
        }
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
            line.remove_prefix(1);
        }
        if (line.empty()) {
            continue;
        }
        const std::size_t colon = line.find(':');
        if (colon == std::string_view::npos) {
            continue;
        }
        std::string field(line.substr(0, colon));
        std::transform(field.begin(), field.end(), field.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        std::string_view value = line.substr(colon + 1);
        while (!value.empty() && (value.front() == ' ' || value.front() == '\t')) {
            value.remove_prefix(1);
        }

        if (field == "user-agent") {
            std::string agent(value);
            std::transform(agent.begin(), agent.end(), agent.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            if (!in_group) {
                in_group = true;
                group_matches = false;
                group_specific = false;
            }
            if (agent == "*") {
                group_matches = true;
            } else if (!agent.empty() && ua_lower.find(agent) != std::string::npos) {
                group_matches = true;
                group_specific = true;
            }
        } else if (field == "disallow" || field == "allow") {
            in_group = false;
            if (!group_matches) {
                continue;
            }
            Rule rule{std::string(value), field == "allow"};
            if (rule.prefix.empty() && !rule.allow) {
                continue;  // "Disallow:" means allow everything
            }
            if (group_specific) {
                specific.rules_.push_back(rule);
                have_specific = true;
            } else {
                wildcard.rules_.push_back(rule);
            }
        } else {
            in_group = false;
        }
    }
    return have_specific ? specific : wildcard;
}

bool RobotsRules::allowed(std::string_view path) const {
    std::size_t best_len = 0;
    bool best_allow = true;
    for (const Rule& rule : rules_) {
        if (path.starts_with(rule.prefix) && rule.prefix.size() >= best_len) {
            if (rule.prefix.size() > best_len || rule.allow) {
                best_allow = rule.allow;
            }
            best_len = rule.prefix.size();
        }
    }
    return best_allow;
}

namespace {

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class HostThrottle {
public:
    explicit HostThrottle(std::uint64_t delay_ms) : delay_(delay_ms) {}

    void acquire(const std::string& host) {
        if (delay_.count() == 0) {
            return;
        }
        std::chrono::steady_clock::time_point slot;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            const auto now = std::chrono::steady_clock::now();
            auto& next = next_slot_[host];
            slot = std::max(now, next);
            next = slot + delay_;
        }
        std::this_thread::sleep_until(slot);
    }

private:
    std::chrono::milliseconds delay_;
    std::mutex mutex_;
    std::unordered_map<std::string, std::chrono::steady_clock::time_point> next_slot_;
};

bool looks_like_html(const FetchResult& result) {
    if (result.content_type.find("html") != std::string::npos) {
        return true;
    }
    if (!result.content_type.empty() && result.content_type.find("text/") == std::string::npos) {
        return false;
    }
    return result.body.find('<') != std::string::npos;
}

}  // namespace

std::vector<Page> crawl(const std::vector<std::string>& seeds, Fetcher& fetcher,
                        const CrawlConfig& config, const std::function<void(const Page&)>& sink) {
    config.validate();
    if (seeds.empty()) {
        throw ConfigError("crawl: no seed URLs");
    }
    const PublicSuffixList psl_file = config.psl_path.empty()
                                          ? PublicSuffixList{}
                                          : PublicSuffixList::from_file(config.psl_path);
    const PublicSuffixList& psl =
        config.psl_path.empty() ? PublicSuffixList::builtin() : psl_file;

    struct Entry {
        Url url;
        std::string normalized;
        std::uint64_t depth = 0;
        std::string seed_root;
    };

    std::vector<Entry> wave;
    std::unordered_set<std::string> visited;
    for (const std::string& seed : seeds) {
        const auto url = parse_url(seed);
        if (!url) {
            throw ParseError("crawl: malformed seed URL: " + seed);
        }
        Entry e{*url, url->to_string(), 0, psl.registrable_domain(url->host)};
        if (visited.insert(e.normalized).second) {
            wave.push_back(std::move(e));
        }
    }

    std::unordered_map<std::string, RobotsRules> robots_cache;
    const auto robots_for = [&](const Url& url) -> const RobotsRules& {
        const std::string key = url.scheme + "://" + url.host +
                                (url.port >= 0 ? ":" + std::to_string(url.port) : "");
        const auto it = robots_cache.find(key);
        if (it != robots_cache.end()) {
            return it->second;
        }
        RobotsRules rules = RobotsRules::allow_all();
        if (config.obey_robots) {
            const FetchResult r = fetcher.fetch(key + "/robots.txt");
            if (r.status >= 200 && r.status < 300) {
                rules = RobotsRules::parse(r.body, config.user_agent);
            }
        }
        return robots_cache.emplace(key, std::move(rules)).first->second;
    };

    HostThrottle throttle(config.politeness_delay_ms);
    std::vector<Page> pages;
    std::uint64_t budget = config.max_pages;

    while (!wave.empty() && budget > 0) {
        // Respect robots and the page budget in deterministic wave order.
        std::vector<Entry> batch;
        for (Entry& e : wave) {
            if (batch.size() >= budget) {
                break;
            }
            std::string full_path = e.url.path;
            if (!e.url.query.empty()) {
                full_path += '?' + e.url.query;
            }
            if (!robots_for(e.url).allowed(full_path)) {
                continue;
            }
            batch.push_back(std::move(e));
        }
        wave.clear();
        if (batch.empty()) {
            break;
        }
        budget -= batch.size();

        std::vector<FetchResult> results(batch.size());
        parallel_for(batch.size(), config.concurrency, [&](std::size_t i) {
            throttle.acquire(batch[i].url.host);
            results[i] = fetcher.fetch(batch[i].normalized);
        });

        for (std::size_t i = 0; i < batch.size(); ++i) {
            const Entry& entry = batch[i];
            const FetchResult& result = results[i];
            Page page;
            page.url = entry.normalized;
            page.depth = entry.depth;
            page.fetched_at = iso8601_now();
            page.status = result.status;
            page.seed_root = entry.seed_root;

            const bool ok = result.status >= 200 && result.status < 300;
            if (ok) {
                page.text = looks_like_html(result) ? extract_text(result.body)
                                                    : utf8::sanitize(result.body);
            }
            if (ok && entry.depth < config.max_depth && looks_like_html(result)) {
                for (const std::string& link : extract_links(result.body, entry.url)) {
                    const auto url = parse_url(link);
                    if (!url) {
                        continue;
                    }
                    if (psl.registrable_domain(url->host) != entry.seed_root) {
                        continue;
                    }
                    if (!visited.insert(link).second) {
                        continue;
                    }
                    wave.push_back(Entry{*url, link, entry.depth + 1, entry.seed_root});
                }
            }
            if (sink) {
                sink(page);
            }
            pages.push_back(std::move(page));
        }
    }
    return pages;
}

}  // namespace tibcorpus::crawl
