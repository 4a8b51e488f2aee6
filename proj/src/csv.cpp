#include "hhnet/csv.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "hhnet/errors.hpp"

namespace hhnet::csv {

std::vector<std::vector<std::string>> parse(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        if (field_started || !field.empty() || !row.empty()) {
            end_field();
            // skip rows that are a single empty field (blank line)
            if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
            row.clear();
        }
    };

    char c;
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            in_quotes = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
            field_started = true;  // next field exists even if empty
        } else if (c == '\n') {
            end_row();
        } else if (c == '\r') {
            // swallow; \r\n handled by the following \n, bare \r ends the row
            if (in.peek() != '\n') end_row();
        } else {
            field += c;
            field_started = true;
        }
    }
    end_row();
    return rows;
}

std::vector<std::vector<std::string>> parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return parse(in);
}

std::string escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape(fields[i]);
    }
    out << '\n';
}

}  // namespace hhnet::csv
