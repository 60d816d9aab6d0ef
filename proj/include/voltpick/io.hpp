// Copyright 2026 The voltpick Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VOLTPICK_IO_HPP_
#define VOLTPICK_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace voltpick {

// Throws Error(kIoError).
std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`.
// Throws Error(kIoError); on failure `path` is left untouched.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

// Writes every file or none: all temporaries are written first, then
// renamed in order. Throws Error(kIoError).
void write_files_atomic(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files);

// True when `text` is well-formed UTF-8.
bool is_valid_utf8(std::string_view text);

}  // namespace voltpick

#endif  // VOLTPICK_IO_HPP_
