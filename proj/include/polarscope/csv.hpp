#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace polarscope::csv {

// A CSV file as an ordered sequence of lines: '#' comment lines are kept
// verbatim so emit(parse(x)) round-trips byte-identically for files this
// library wrote.
struct Line {
    bool comment = false;
    std::string text;                 // comment body including leading '#'
    std::vector<std::string> fields;  // data fields when !comment
};

struct File {
    std::vector<Line> lines;

    void comment(std::string_view body);                  // "# body"
    void row(std::vector<std::string> fields);
    // First non-comment line, by convention the header.
    const std::vector<std::string>* header() const;
    // Data rows after the header.
    std::vector<const std::vector<std::string>*> data_rows() const;
};

// Quotes only when the field contains a comma, quote, or newline.
std::string escape(std::string_view field);

std::string emit(const File& f);
File parse(std::string_view content);

void write_file(const std::string& path, const File& f);  // atomic: temp + rename
File read_file(const std::string& path);

std::string format_double(double v);  // shortest round-trip decimal

}  // namespace polarscope::csv
