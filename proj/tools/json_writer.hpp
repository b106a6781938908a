#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace brx::tools {

// Insertion-ordered JSON emitter with pinned number formatting: floats at 12
// significant digits, non-finite values as null. Byte-stable for identical
// inputs, which is what the output-determinism guarantee rides on.
class JsonWriter {
 public:
  JsonWriter() { buf_ = "{"; stack_.push_back(State::object_first); }

  void key(std::string_view k) {
    comma_for_member();
    append_string(k);
    buf_ += ": ";
  }

  void begin_object(std::string_view k) { key(k); buf_ += "{"; stack_.push_back(State::object_first); }
  void end_object() { pop('}'); }
  void begin_array(std::string_view k) { key(k); buf_ += "["; stack_.push_back(State::array_first); }
  void end_array() { pop(']'); }

  // object as an array element
  void begin_object_element() {
    comma_for_element();
    buf_ += "{";
    stack_.push_back(State::object_first);
  }

  void field(std::string_view k, double v) { key(k); append_double(v); }
  void field(std::string_view k, bool v) { key(k); buf_ += v ? "true" : "false"; }
  void field(std::string_view k, int v) { field_int(k, static_cast<long long>(v)); }
  void field(std::string_view k, long long v) { field_int(k, v); }
  void field(std::string_view k, std::uint64_t v) {
    key(k);
    char tmp[32];
    std::snprintf(tmp, sizeof tmp, "%llu", static_cast<unsigned long long>(v));
    buf_ += tmp;
  }
  void field(std::string_view k, std::string_view v) { key(k); append_string(v); }
  void field(std::string_view k, const char* v) { field(k, std::string_view(v)); }
  void field_null(std::string_view k) { key(k); buf_ += "null"; }

  void element(double v) { comma_for_element(); append_double(v); }
  void element(long long v) {
    comma_for_element();
    char tmp[32];
    std::snprintf(tmp, sizeof tmp, "%lld", v);
    buf_ += tmp;
  }
  void element(int v) { element(static_cast<long long>(v)); }
  void element(std::string_view v) { comma_for_element(); append_string(v); }

  // closes the root object and returns the document
  std::string take() {
    while (!stack_.empty()) pop(stack_.back() == State::array_first || stack_.back() == State::array_next ? ']' : '}');
    buf_ += "\n";
    return std::move(buf_);
  }

 private:
  enum class State { object_first, object_next, array_first, array_next };

  void field_int(std::string_view k, long long v) {
    key(k);
    char tmp[32];
    std::snprintf(tmp, sizeof tmp, "%lld", v);
    buf_ += tmp;
  }

  void comma_for_member() {
    if (stack_.back() == State::object_next) buf_ += ",";
    stack_.back() = State::object_next;
    newline_indent();
  }

  void comma_for_element() {
    if (stack_.back() == State::array_next) buf_ += ", ";
    stack_.back() = State::array_next;
  }

  void newline_indent() {
    buf_ += "\n";
    buf_.append(2 * stack_.size(), ' ');
  }

  void pop(char close) {
    const State s = stack_.back();
    stack_.pop_back();
    if (s == State::object_next) {  // non-empty object: put the brace on its own line
      buf_ += "\n";
      buf_.append(2 * stack_.size(), ' ');
    }
    buf_ += close;
  }

  void append_double(double v) {
    if (!std::isfinite(v)) {
      buf_ += "null";
      return;
    }
    char tmp[40];
    std::snprintf(tmp, sizeof tmp, "%.12g", v);
    buf_ += tmp;
  }

  void append_string(std::string_view s) {
    buf_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': buf_ += "\\\""; break;
        case '\\': buf_ += "\\\\"; break;
        case '\n': buf_ += "\\n"; break;
        case '\t': buf_ += "\\t"; break;
        case '\r': buf_ += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char tmp[8];
            std::snprintf(tmp, sizeof tmp, "\\u%04x", c);
            buf_ += tmp;
          } else {
            buf_ += c;
          }
      }
    }
    buf_ += '"';
  }

  std::string buf_;
  std::vector<State> stack_;
};

}  // namespace brx::tools
