#include "polarscope/csv.hpp"

#include <charconv>
#include <stdexcept>

#include "polarscope/io.hpp"

namespace polarscope::csv {

void File::comment(std::string_view body) {
    Line l;
    l.comment = true;
    l.text = "# ";
    l.text += body;
    lines.push_back(std::move(l));
}

void File::row(std::vector<std::string> fields) {
    Line l;
    l.fields = std::move(fields);
    lines.push_back(std::move(l));
}

const std::vector<std::string>* File::header() const {
    for (const auto& l : lines)
        if (!l.comment) return &l.fields;
    return nullptr;
}

std::vector<const std::vector<std::string>*> File::data_rows() const {
    std::vector<const std::vector<std::string>*> out;
    bool seen_header = false;
    for (const auto& l : lines) {
        if (l.comment) continue;
        if (!seen_header) { seen_header = true; continue; }
        out.push_back(&l.fields);
    }
    return out;
}

std::string escape(std::string_view field) {
    bool needs = field.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs && !(field.size() && field.front() == '#')) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string emit(const File& f) {
    std::string out;
    for (const auto& l : f.lines) {
        if (l.comment) {
            out += l.text;
        } else {
            for (std::size_t i = 0; i < l.fields.size(); ++i) {
                if (i) out += ',';
                out += escape(l.fields[i]);
            }
        }
        out += '\n';
    }
    return out;
}

File parse(std::string_view content) {
    File f;
    const std::size_t n = content.size();
    std::size_t pos = 0;
    while (pos < n) {
        if (content[pos] == '#') {  // comment runs to end of line, no quoting
            std::size_t eol = content.find('\n', pos);
            if (eol == std::string_view::npos) eol = n;
            std::string_view line = content.substr(pos, eol - pos);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            Line l;
            l.comment = true;
            l.text = std::string(line);
            f.lines.push_back(std::move(l));
            pos = eol == n ? n : eol + 1;
            continue;
        }
        if (content[pos] == '\n') {  // empty data line: zero fields
            f.lines.push_back(Line{});
            ++pos;
            continue;
        }
        if (content[pos] == '\r' && pos + 1 < n && content[pos + 1] == '\n') {
            f.lines.push_back(Line{});
            pos += 2;
            continue;
        }
        Line l;
        std::string field;
        bool record_done = false;
        while (!record_done) {
            if (pos < n && content[pos] == '"') {  // quoted: newlines stay in the field
                ++pos;
                while (pos < n) {
                    if (content[pos] == '"') {
                        if (pos + 1 < n && content[pos + 1] == '"') {
                            field += '"';
                            pos += 2;
                        } else {
                            ++pos;
                            break;
                        }
                    } else {
                        field += content[pos++];
                    }
                }
            } else {
                while (pos < n && content[pos] != ',' && content[pos] != '\n' &&
                       content[pos] != '\r')
                    field += content[pos++];
            }
            l.fields.push_back(std::move(field));
            field.clear();
            if (pos < n && content[pos] == ',') {
                ++pos;
                continue;
            }
            if (pos < n && content[pos] == '\r') ++pos;
            if (pos < n && content[pos] == '\n') ++pos;
            record_done = true;
        }
        f.lines.push_back(std::move(l));
    }
    return f;
}

void write_file(const std::string& path, const File& f) {
    write_file_atomic(path, emit(f));
}

File read_file(const std::string& path) {
    return parse(read_file_to_string(path));
}

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buf, p);
}

}  // namespace polarscope::csv
