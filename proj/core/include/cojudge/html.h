// Copyright 2026 The cojudge Authors
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

#ifndef COJUDGE_HTML_H_
#define COJUDGE_HTML_H_

#include <string>
#include <string_view>
#include <vector>

namespace cojudge::html {

// Decodes named (amp, lt, gt, quot, apos, nbsp) and numeric entities.
std::string DecodeEntities(std::string_view text);

struct VisibleTextOptions {
  // Elements whose whole content is dropped. script and style are always
  // dropped; callers may add more (e.g. "pre", "code").
  std::vector<std::string> drop_elements;
};

// Text a browser would render, with block-level elements separated by
// newlines. Comments, <script> and <style> are removed.
std::string VisibleText(std::string_view html,
                        VisibleTextOptions const& options = {});

// Rendered text of every `tag` element, in document order. Whitespace inside
// the element is preserved; the newline directly after the opening tag is
// dropped as browsers do. Nested elements of the same tag are not split.
std::vector<std::string> ElementTexts(std::string_view html,
                                      std::string_view tag);

}  // namespace cojudge::html

#endif  // COJUDGE_HTML_H_
