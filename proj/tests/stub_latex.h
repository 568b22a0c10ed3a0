// Copyright 2026 The tablebench Authors
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


#ifndef TABLEBENCH_TESTS_STUB_LATEX_H_
#define TABLEBENCH_TESTS_STUB_LATEX_H_

#include <cstdio>
#include <filesystem>
#include <map>
#include <string>

#include "tablebench/benchgen.h"
#include "test_util.h"

namespace tbtest {

using tablebench::CompileResult;
using tablebench::Complexity;
using tablebench::TableAsset;
using tablebench::filler_corpus;
namespace fs = std::filesystem;

inline std::string fmt_pt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5fpt", v);
  return buf;
}

// Stand-in for pdflatex. Knows the measured size of every table it may see
// and typesets filler at a fixed cost per character, so page geometry is
// simulated without a TeX installation.
class StubLatex : public tablebench::LatexRunner {
 public:
  struct Box {
    double width = 0;
    double height = 0;
  };

  std::map<std::string, Box> boxes;  // keyed by table LaTeX
  double column_width = 345.0;
  double text_height = 550.0;
  double filler_pt_per_char = 0.04;
  int compiles = 0;

  CompileResult compile(const std::string& source, const fs::path& workdir,
                        const std::string& jobname) override {
    ++compiles;
    fs::create_directories(workdir);
    write_file(workdir / (jobname + ".tex"), source);
    CompileResult res;
    res.pdf_path = workdir / (jobname + ".pdf");
    if (source.find("\\undefinedmacro") != std::string::npos) {
      res.log = "! Undefined control sequence.\n";
      return res;
    }
    if (source.find("\\sbox{\\tbbox}{") != std::string::npos) {
      for (const auto& [latex, box] : boxes) {
        if (source.find("\\sbox{\\tbbox}{" + latex + "}") == std::string::npos) continue;
        res.log = "TBDIM:" + fmt_pt(box.width) + ":" + fmt_pt(box.height * 0.9) + ":" +
                  fmt_pt(box.height * 0.1) + "\nOutput written on table.pdf (1 page, 100 bytes).\n";
        res.ok = true;
        res.pages = 1;
        write_file(res.pdf_path, "%PDF-stub");
        return res;
      }
      res.log = "! LaTeX Error: unknown table.\n";
      return res;
    }

    double used = 0;
    bool overfull = false;
    for (const auto& [latex, box] : boxes) {
      if (source.find(latex) == std::string::npos) continue;
      const bool scaled = source.find("\\adjustbox{max width=\\columnwidth}{" + latex) != std::string::npos;
      double w = box.width;
      double h = box.height;
      if (scaled && w > column_width) {
        h *= column_width / w;
        w = column_width;
      }
      if (w > column_width) overfull = true;
      used += h + 20;
    }
    for (const auto& para : filler_corpus()) {
      for (auto pos = source.find(para); pos != std::string::npos; pos = source.find(para, pos + 1)) {
        used += static_cast<double>(para.size()) * filler_pt_per_char * 10;
      }
    }
    res.pages = used > text_height ? 2 : 1;
    res.ok = true;
    res.log = "TBCOL:" + fmt_pt(column_width) + "\nTBTEXT:" + fmt_pt(text_height) +
              "\nTBREMAIN:" + fmt_pt(text_height - used) + "\nTBCOLUMN:1\n";
    if (overfull) res.log += "Overfull \\hbox (12.0pt too wide) in paragraph\n";
    res.log += "Output written on page.pdf (" + std::to_string(res.pages) + " pages, 100 bytes).\n";
    write_file(res.pdf_path, "%PDF-stub " + std::to_string(compiles));
    return res;
  }
};

inline TableAsset asset(const std::string& id, int cells, double w, double h, StubLatex& stub,
                 Complexity c = Complexity::kSimple) {
  std::string latex = "\\begin{tabular}{cc}\n";
  for (int i = 0; i < cells; ++i) latex += id + "-" + std::to_string(i) + " & v \\\\\n";
  latex += "\\end{tabular}";
  stub.boxes[latex] = {w, h};
  TableAsset a;
  a.id = id;
  a.latex = latex;
  a.width_pt = w;
  a.height_pt = h;
  a.complexity = c;
  a.origin = id + ".tex#0";
  return a;
}

}  // namespace tbtest

#endif  // TABLEBENCH_TESTS_STUB_LATEX_H_
