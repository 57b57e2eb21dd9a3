#pragma once

#include "wpf/article.hpp"
#include "wpf/text.hpp"

#include <string>
#include <string_view>

namespace wpf::testing {

inline Article make_article(std::string site, PostId id, std::string lang, std::string_view date_gmt,
                            std::string_view body) {
    Article a;
    a.site_id = std::move(site);
    a.post_id = id;
    a.language = std::move(lang);
    a.url = "https://" + a.site_id + ".example/" + (a.language == "en" ? "" : a.language + "/") + "post-" +
            std::to_string(id) + "/";
    a.title = "Post " + std::to_string(id);
    a.date_gmt = parse_timestamp(date_gmt);
    a.modified_gmt = a.date_gmt;
    a.date_msk = to_moscow(a.date_gmt);
    a.modified_msk = to_moscow(a.modified_gmt);
    a.paragraphs = text::split(body, '\n');
    a.text = join_paragraphs(a.paragraphs);
    return a;
}

}  // namespace wpf::testing
