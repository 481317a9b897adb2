// Converter for the SemEval-2016 Task 3 XML schema carrying factuality
// annotations. A minimal pull parser is enough here: the schema is flat
// (Thread / RelQuestion / RelComment) and the converter is the only
// consumer.

#include <cctype>
#include <map>

#include "qlfc/common.hpp"
#include "qlfc/corpus.hpp"

namespace qlfc {

namespace {

struct XmlEvent {
    enum Kind { StartElement, EndElement, Text, End } kind = End;
    std::string name;
    std::map<std::string, std::string> attrs;
    std::string text;
    bool self_closing = false;
};

class XmlScanner {
public:
    XmlScanner(const std::string& input, const std::string& origin)
        : in_(input), origin_(origin) {}

    XmlEvent next() {
        XmlEvent ev;
        skip_insignificant();
        if (pos_ >= in_.size()) return ev;  // End
        if (in_[pos_] != '<') {
            size_t start = pos_;
            while (pos_ < in_.size() && in_[pos_] != '<') ++pos_;
            ev.kind = XmlEvent::Text;
            ev.text = decode_entities(in_.substr(start, pos_ - start));
            return ev;
        }
        ++pos_;  // consume '<'
        if (pos_ < in_.size() && in_[pos_] == '/') {
            ++pos_;
            ev.kind = XmlEvent::EndElement;
            ev.name = read_name();
            skip_ws();
            expect('>');
            return ev;
        }
        ev.kind = XmlEvent::StartElement;
        ev.name = read_name();
        while (true) {
            skip_ws();
            if (pos_ >= in_.size()) fail("unterminated element");
            if (in_[pos_] == '>') {
                ++pos_;
                return ev;
            }
            if (in_[pos_] == '/') {
                ++pos_;
                expect('>');
                ev.self_closing = true;
                return ev;
            }
            std::string attr = read_name();
            skip_ws();
            expect('=');
            skip_ws();
            if (pos_ >= in_.size() || (in_[pos_] != '"' && in_[pos_] != '\'')) {
                fail("attribute value must be quoted");
            }
            char quote = in_[pos_++];
            size_t start = pos_;
            while (pos_ < in_.size() && in_[pos_] != quote) ++pos_;
            if (pos_ >= in_.size()) fail("unterminated attribute value");
            ev.attrs[attr] = decode_entities(in_.substr(start, pos_ - start));
            ++pos_;
        }
    }

    [[noreturn]] void fail(const std::string& msg) const {
        size_t line = 1;
        for (size_t i = 0; i < pos_ && i < in_.size(); ++i) {
            if (in_[i] == '\n') ++line;
        }
        throw ValidationError(origin_ + ":" + std::to_string(line) + ": " + msg);
    }

private:
    void skip_ws() {
        while (pos_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[pos_]))) ++pos_;
    }

    // Comments, <?...?> declarations and <!...> markers carry no data.
    void skip_insignificant() {
        while (pos_ < in_.size()) {
            if (in_.compare(pos_, 4, "<!--") == 0) {
                size_t end = in_.find("-->", pos_ + 4);
                if (end == std::string::npos) fail("unterminated comment");
                pos_ = end + 3;
            } else if (in_.compare(pos_, 2, "<?") == 0) {
                size_t end = in_.find("?>", pos_ + 2);
                if (end == std::string::npos) fail("unterminated declaration");
                pos_ = end + 2;
            } else if (in_.compare(pos_, 2, "<!") == 0) {
                size_t end = in_.find('>', pos_ + 2);
                if (end == std::string::npos) fail("unterminated markup declaration");
                pos_ = end + 1;
            } else {
                return;
            }
        }
    }

    std::string read_name() {
        size_t start = pos_;
        while (pos_ < in_.size() &&
               (std::isalnum(static_cast<unsigned char>(in_[pos_])) || in_[pos_] == '_' ||
                in_[pos_] == '-' || in_[pos_] == ':' || in_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ == start) fail("expected a name");
        return in_.substr(start, pos_ - start);
    }

    void expect(char c) {
        if (pos_ >= in_.size() || in_[pos_] != c) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    std::string decode_entities(const std::string& raw) {
        std::string out;
        out.reserve(raw.size());
        for (size_t i = 0; i < raw.size();) {
            if (raw[i] != '&') {
                out += raw[i++];
                continue;
            }
            size_t semi = raw.find(';', i);
            if (semi == std::string::npos || semi - i > 10) {
                out += raw[i++];
                continue;
            }
            std::string ent = raw.substr(i + 1, semi - i - 1);
            if (ent == "amp") out += '&';
            else if (ent == "lt") out += '<';
            else if (ent == "gt") out += '>';
            else if (ent == "quot") out += '"';
            else if (ent == "apos") out += '\'';
            else if (!ent.empty() && ent[0] == '#') {
                int code = 0;
                try {
                    code = ent[1] == 'x' || ent[1] == 'X'
                               ? std::stoi(ent.substr(2), nullptr, 16)
                               : std::stoi(ent.substr(1));
                } catch (...) {
                    fail("bad character reference &" + ent + ";");
                }
                if (code < 0x80) {
                    out += static_cast<char>(code);
                } else {  // UTF-8 encode
                    if (code < 0x800) {
                        out += static_cast<char>(0xc0 | (code >> 6));
                    } else {
                        out += static_cast<char>(0xe0 | (code >> 12));
                        out += static_cast<char>(0x80 | ((code >> 6) & 0x3f));
                    }
                    out += static_cast<char>(0x80 | (code & 0x3f));
                }
            } else {
                fail("unknown entity &" + ent + ";");
            }
            i = semi + 1;
        }
        return out;
    }

    const std::string& in_;
    const std::string origin_;
    size_t pos_ = 0;
};

UtcSeconds parse_release_date(const std::string& s, int offset_minutes) {
    // The release writes local wall time without a zone; RFC 3339 values
    // are accepted too so round-tripped files keep working.
    if (s.size() >= 20 && (s.back() == 'Z' || s[19] == '+' || s[19] == '-')) {
        return parse_rfc3339(s);
    }
    return parse_local_datetime(s, offset_minutes);
}

std::string attr_or(const std::map<std::string, std::string>& attrs, const std::string& key,
                    const std::string& fallback = std::string()) {
    auto it = attrs.find(key);
    return it == attrs.end() ? fallback : it->second;
}

}  // namespace

Dataset convert_semeval_xml(const std::string& xml, int forum_utc_offset_minutes,
                            const std::string& origin) {
    XmlScanner scanner(xml, origin);
    Dataset dataset;
    Thread* current = nullptr;
    std::string pending_text_target;  // RelQSubject / RelQBody / RelCText

    for (XmlEvent ev = scanner.next(); ev.kind != XmlEvent::End; ev = scanner.next()) {
        switch (ev.kind) {
            case XmlEvent::StartElement:
                if (ev.name == "Thread") {
                    dataset.emplace_back();
                    current = &dataset.back();
                } else if (ev.name == "RelQuestion") {
                    if (!current) scanner.fail("RelQuestion outside Thread");
                    current->question.id = attr_or(ev.attrs, "RELQ_ID");
                    current->question.category = attr_or(ev.attrs, "RELQ_CATEGORY");
                    current->question.user_id = attr_or(ev.attrs, "RELQ_USERID");
                    std::string date = attr_or(ev.attrs, "RELQ_DATE");
                    if (date.empty()) scanner.fail("RelQuestion missing RELQ_DATE");
                    current->question.timestamp =
                        parse_release_date(date, forum_utc_offset_minutes);
                } else if (ev.name == "RelComment") {
                    if (!current) scanner.fail("RelComment outside Thread");
                    Answer ans;
                    ans.id = attr_or(ev.attrs, "RELC_ID");
                    ans.user_id = attr_or(ev.attrs, "RELC_USERID");
                    std::string date = attr_or(ev.attrs, "RELC_DATE");
                    if (date.empty()) scanner.fail("RelComment missing RELC_DATE");
                    ans.timestamp = parse_release_date(date, forum_utc_offset_minutes);
                    ans.goodness = goodness_from_name(
                        attr_or(ev.attrs, "RELC_RELEVANCE2RELQ", "Good"));
                    std::string fact = attr_or(ev.attrs, "RELC_FACT_LABEL");
                    if (!fact.empty()) {
                        if (ans.goodness != Goodness::Good) {
                            scanner.fail("fact label on a non-Good comment '" + ans.id + "'");
                        }
                        ans.fact_label = fact_label_from_name(fact);
                    }
                    ans.thread_position = static_cast<int>(current->answers.size()) + 1;
                    current->answers.push_back(std::move(ans));
                } else if (ev.name == "RelQSubject" || ev.name == "RelQBody" ||
                           ev.name == "RelCText") {
                    pending_text_target = ev.self_closing ? std::string() : ev.name;
                }
                break;
            case XmlEvent::Text:
                if (!pending_text_target.empty() && current) {
                    if (pending_text_target == "RelQSubject") {
                        current->question.subject += ev.text;
                    } else if (pending_text_target == "RelQBody") {
                        current->question.body += ev.text;
                    } else if (!current->answers.empty()) {
                        current->answers.back().body += ev.text;
                    }
                }
                break;
            case XmlEvent::EndElement:
                if (ev.name == "Thread") current = nullptr;
                if (ev.name == pending_text_target) pending_text_target.clear();
                break;
            case XmlEvent::End:
                break;
        }
    }

    for (Thread& t : dataset) {
        t.question.subject = trim(t.question.subject);
        t.question.body = trim(t.question.body);
        for (Answer& a : t.answers) a.body = trim(a.body);
        if (t.question.id.empty()) {
            throw ValidationError(origin + ": Thread with empty RELQ_ID");
        }
    }
    return dataset;
}

Dataset load_semeval_xml(const std::string& path, int forum_utc_offset_minutes) {
    return convert_semeval_xml(read_file(path), forum_utc_offset_minutes, path);
}

}  // namespace qlfc
