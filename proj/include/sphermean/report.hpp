#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "sphermean/common.hpp"

namespace sphermean::report {

/// JSON document tree for harness reports. Objects emit with keys sorted and
/// floats printed at 17 significant digits, so identical runs produce
/// byte-identical documents.
class Value {
public:
    Value() : data_(nullptr) {}
    Value(bool b) : data_(b) {}
    Value(int v) : data_(static_cast<std::int64_t>(v)) {}
    Value(std::int64_t v) : data_(v) {}
    Value(double v) : data_(v) {}
    Value(const char* s) : data_(std::string(s)) {}
    Value(std::string s) : data_(std::move(s)) {}

    static Value object() {
        Value v;
        v.data_ = Object{};
        return v;
    }
    static Value array() {
        Value v;
        v.data_ = Array{};
        return v;
    }

    Value& set(const std::string& key, Value v) {
        std::get<Object>(data_)[key] = std::move(v);
        return *this;
    }

    Value& push(Value v) {
        std::get<Array>(data_).push_back(std::move(v));
        return *this;
    }

    template <typename T>
    static Value from_vector(const std::vector<T>& xs) {
        Value a = array();
        for (const auto& x : xs) a.push(Value(x));
        return a;
    }

    void emit(std::ostream& os, int indent = 0) const {
        struct Emitter {
            std::ostream& os;
            void value(const Value& v, int ind) const {
                if (std::holds_alternative<std::nullptr_t>(v.data_)) {
                    os << "null";
                } else if (auto b = std::get_if<bool>(&v.data_)) {
                    os << (*b ? "true" : "false");
                } else if (auto i = std::get_if<std::int64_t>(&v.data_)) {
                    os << *i;
                } else if (auto d = std::get_if<double>(&v.data_)) {
                    require(std::isfinite(*d), "report: non-finite value");
                    char buf[40];
                    std::snprintf(buf, sizeof buf, "%.17g", *d);
                    os << buf;
                } else if (auto s = std::get_if<std::string>(&v.data_)) {
                    os << '"';
                    for (char c : *s) {
                        switch (c) {
                            case '"': os << "\\\""; break;
                            case '\\': os << "\\\\"; break;
                            case '\n': os << "\\n"; break;
                            case '\t': os << "\\t"; break;
                            default:
                                if (static_cast<unsigned char>(c) < 0x20) {
                                    char buf[8];
                                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                                    os << buf;
                                } else {
                                    os << c;
                                }
                        }
                    }
                    os << '"';
                } else if (auto a = std::get_if<Array>(&v.data_)) {
                    if (a->empty()) {
                        os << "[]";
                        return;
                    }
                    os << "[";
                    for (std::size_t i = 0; i < a->size(); ++i) {
                        if (i) os << ", ";
                        value((*a)[i], ind);
                    }
                    os << "]";
                } else if (auto o = std::get_if<Object>(&v.data_)) {
                    if (o->empty()) {
                        os << "{}";
                        return;
                    }
                    os << "{\n";
                    std::size_t n = 0;
                    for (const auto& [k, val] : *o) { // std::map: keys sorted
                        pad(ind + 2);
                        os << '"' << k << "\": ";
                        value(val, ind + 2);
                        if (++n < o->size()) os << ",";
                        os << "\n";
                    }
                    pad(ind);
                    os << "}";
                }
            }
            void pad(int n) const {
                for (int i = 0; i < n; ++i) os << ' ';
            }
        };
        Emitter{os}.value(*this, indent);
    }

    std::string str() const {
        std::ostringstream os;
        emit(os);
        os << "\n";
        return os.str();
    }

private:
    using Array = std::vector<Value>;
    using Object = std::map<std::string, Value>;
    std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Array, Object> data_;
};

} // namespace sphermean::report
