// SPDX-License-Identifier: Apache-2.0
#include "crawl/crawler.hpp"

#ifdef TIBCORPUS_WITH_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

namespace tibcorpus::crawl {

namespace {

class HttpFetcher final : public Fetcher {
public:
    explicit HttpFetcher(const CrawlConfig& config) : config_(config) {}

    FetchResult fetch(const std::string& url) override {
        FetchResult result;
        const auto parsed = parse_url(url);
        if (!parsed) {
            return result;
        }
#ifndef TIBCORPUS_WITH_OPENSSL
        if (parsed->scheme == "https") {
            return result;  // TLS not built in; reported as transport failure
        }
#endif
        std::string origin = parsed->scheme + "://" + parsed->host;
        if (parsed->port >= 0) {
            origin += ':' + std::to_string(parsed->port);
        }
        httplib::Client client(origin);
        client.set_connection_timeout(std::chrono::milliseconds(config_.timeout_ms));
        client.set_read_timeout(std::chrono::milliseconds(config_.timeout_ms));
        client.set_follow_location(true);
        client.set_default_headers({{"User-Agent", config_.user_agent}});

        std::string target = parsed->path;
        if (!parsed->query.empty()) {
            target += '?' + parsed->query;
        }
        auto response = client.Get(target);
        if (!response) {
            return result;
        }
        result.status = response->status;
        result.body = std::move(response->body);
        result.content_type = response->get_header_value("Content-Type");
        return result;
    }

private:
    CrawlConfig config_;
};

}  // namespace

std::unique_ptr<Fetcher> make_http_fetcher(const CrawlConfig& config) {
    return std::make_unique<HttpFetcher>(config);
}

}  // namespace tibcorpus::crawl
