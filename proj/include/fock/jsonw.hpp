#pragma once

// Minimal deterministic JSON writer.
//
// Keys are emitted in call order, floats with "%.17g" (round-trip exact for
// doubles), and non-finite values as the strings "inf" / "-inf" / "nan", so
// identical inputs always byte-reproduce the same document.  No whitespace is
// emitted.  atomic_write_file stages through a temp file and renames.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fock {

class JsonWriter {
  public:
    JsonWriter& begin_object() {
        value_prefix();
        buf_ += '{';
        stack_.push_back({true, true});
        return *this;
    }
    JsonWriter& end_object() {
        pop_frame(true);
        buf_ += '}';
        return *this;
    }
    JsonWriter& begin_array() {
        value_prefix();
        buf_ += '[';
        stack_.push_back({false, true});
        return *this;
    }
    JsonWriter& end_array() {
        pop_frame(false);
        buf_ += ']';
        return *this;
    }
    JsonWriter& key(const std::string& k) {
        if (stack_.empty() || !stack_.back().is_object || pending_key_)
            throw std::logic_error("JsonWriter: key outside an object position");
        if (!stack_.back().first) buf_ += ',';
        stack_.back().first = false;
        write_escaped(k);
        buf_ += ':';
        pending_key_ = true;
        return *this;
    }
    JsonWriter& string(const std::string& s) {
        value_prefix();
        write_escaped(s);
        return *this;
    }
    JsonWriter& number(double v) {
        if (std::isnan(v)) return string("nan");
        if (std::isinf(v)) return string(v > 0 ? "inf" : "-inf");
        value_prefix();
        char tmp[40];
        std::snprintf(tmp, sizeof tmp, "%.17g", v);
        buf_ += tmp;
        return *this;
    }
    JsonWriter& integer(long v) {
        value_prefix();
        buf_ += std::to_string(v);
        return *this;
    }
    JsonWriter& boolean(bool v) {
        value_prefix();
        buf_ += v ? "true" : "false";
        return *this;
    }
    // complex numbers as {"re":...,"im":...}
    JsonWriter& complex_value(std::complex<double> v) {
        begin_object();
        key("re").number(v.real());
        key("im").number(v.imag());
        return end_object();
    }

    const std::string& str() const {
        if (!stack_.empty()) throw std::logic_error("JsonWriter: unclosed container");
        return buf_;
    }

  private:
    struct Frame {
        bool is_object;
        bool first;
    };

    void value_prefix() {
        if (stack_.empty()) {
            if (!buf_.empty()) throw std::logic_error("JsonWriter: multiple root values");
            return;
        }
        Frame& f = stack_.back();
        if (f.is_object) {
            if (!pending_key_) throw std::logic_error("JsonWriter: object value without a key");
            pending_key_ = false;
        } else {
            if (!f.first) buf_ += ',';
            f.first = false;
        }
    }
    void pop_frame(bool object) {
        if (stack_.empty() || stack_.back().is_object != object || pending_key_)
            throw std::logic_error("JsonWriter: mismatched container close");
        stack_.pop_back();
    }
    void write_escaped(const std::string& s) {
        buf_ += '"';
        for (unsigned char ch : s) {
            switch (ch) {
                case '"': buf_ += "\\\""; break;
                case '\\': buf_ += "\\\\"; break;
                case '\n': buf_ += "\\n"; break;
                case '\t': buf_ += "\\t"; break;
                case '\r': buf_ += "\\r"; break;
                default:
                    if (ch < 0x20) {
                        char tmp[8];
                        std::snprintf(tmp, sizeof tmp, "\\u%04x", ch);
                        buf_ += tmp;
                    } else {
                        buf_ += char(ch);
                    }
            }
        }
        buf_ += '"';
    }

    std::string buf_;
    std::vector<Frame> stack_;
    bool pending_key_ = false;
};

inline void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open for writing: " + tmp);
        f.write(content.data(), std::streamsize(content.size()));
        f.flush();
        if (!f) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed: " + tmp + " -> " + path);
}

}  // namespace fock
