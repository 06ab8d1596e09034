#ifndef PIDD_TOOLS_JSON_WRITER_HPP
#define PIDD_TOOLS_JSON_WRITER_HPP

#include <cstdio>
#include <string>
#include <vector>

namespace pidd::tools {

// Minimal ordered JSON emitter. Keys appear exactly in insertion order and
// every double prints with 17 significant digits, so a fixed config yields
// byte-identical reports.
class JsonWriter {
 public:
  std::string str() const { return buf_; }

  void begin_object() {
    comma();
    buf_ += '{';
    fresh_ = true;
  }
  void end_object() {
    buf_ += '}';
    fresh_ = false;
  }
  void begin_array() {
    comma();
    buf_ += '[';
    fresh_ = true;
  }
  void end_array() {
    buf_ += ']';
    fresh_ = false;
  }

  void key(const std::string& name) {
    comma();
    append_string(name);
    buf_ += ':';
    fresh_ = true;
  }

  void value(double v) {
    comma();
    char tmp[64];
    std::snprintf(tmp, sizeof(tmp), "%.17g", v);
    buf_ += tmp;
    fresh_ = false;
  }
  void value(int v) {
    comma();
    buf_ += std::to_string(v);
    fresh_ = false;
  }
  void value(long long v) {
    comma();
    buf_ += std::to_string(v);
    fresh_ = false;
  }
  void value(size_t v) {
    comma();
    buf_ += std::to_string(v);
    fresh_ = false;
  }
  void value(bool v) {
    comma();
    buf_ += v ? "true" : "false";
    fresh_ = false;
  }
  void value(const std::string& v) {
    comma();
    append_string(v);
    fresh_ = false;
  }
  void value(const char* v) { value(std::string(v)); }

  template <typename T>
  void kv(const std::string& name, const T& v) {
    key(name);
    value(v);
  }

 private:
  void comma() {
    if (!fresh_ && !buf_.empty()) {
      const char last = buf_.back();
      if (last != '{' && last != '[' && last != ':') buf_ += ',';
    }
    fresh_ = false;
  }

  void append_string(const std::string& s) {
    buf_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': buf_ += "\\\""; break;
        case '\\': buf_ += "\\\\"; break;
        case '\n': buf_ += "\\n"; break;
        case '\t': buf_ += "\\t"; break;
        default: buf_ += c;
      }
    }
    buf_ += '"';
  }

  std::string buf_;
  bool fresh_ = true;
};

}  // namespace pidd::tools

#endif  // PIDD_TOOLS_JSON_WRITER_HPP
