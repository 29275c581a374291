#include "seqrad/json_out.hpp"

#include <cmath>
#include <cstdio>

#include "seqrad/types.hpp"

namespace seqrad {

namespace {

void dump_value(const nlohmann::ordered_json& v, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string closing_pad(static_cast<std::size_t>(indent) * depth, ' ');
    switch (v.type()) {
        case nlohmann::ordered_json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            std::size_t i = 0;
            for (auto it = v.begin(); it != v.end(); ++it, ++i) {
                out += pad;
                out += nlohmann::json(it.key()).dump();
                out += ": ";
                dump_value(it.value(), out, indent, depth + 1);
                if (i + 1 < v.size()) out += ',';
                out += '\n';
            }
            out += closing_pad;
            out += '}';
            return;
        }
        case nlohmann::ordered_json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                out += pad;
                dump_value(v[i], out, indent, depth + 1);
                if (i + 1 < v.size()) out += ',';
                out += '\n';
            }
            out += closing_pad;
            out += ']';
            return;
        }
        case nlohmann::ordered_json::value_t::number_float: {
            const double d = v.get<double>();
            if (!std::isfinite(d)) throw Error("refusing to serialize a non-finite number");
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", d);
            out += buf;
            return;
        }
        default:
            out += v.dump();
            return;
    }
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& doc, int indent) {
    std::string out;
    dump_value(doc, out, indent, 0);
    out += '\n';
    return out;
}

}  // namespace seqrad
