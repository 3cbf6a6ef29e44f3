// Copyright 2026 The TIGeR Engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "tiger/error.hpp"
#include "tiger/value.hpp"

namespace tiger::detail {

/// Cursor over a text buffer; every error carries the absolute byte offset.
class Cursor {
 public:
  explicit Cursor(std::string_view text, std::size_t pos = 0)
      : text_(text), pos_(pos) {}

  std::size_t pos() const { return pos_; }
  void set_pos(std::size_t p) { pos_ = p; }
  bool eof() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  std::string_view rest() const { return text_.substr(pos_); }
  std::string_view text() const { return text_; }

  void skip_ws();
  bool consume(std::string_view token);
  void expect(std::string_view token);
  std::string identifier();
  double number();
  std::string quoted();
  Value value(int depth = 0);

  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(std::size_t pos, const std::string& message) const;

 private:
  std::string_view text_;
  std::size_t pos_;
};

bool is_ident_start(char c);
bool is_ident_char(char c);

}  // namespace tiger::detail
