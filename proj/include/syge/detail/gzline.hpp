#pragma once
#include <zlib.h>

#include <string>

#include "syge/common.hpp"

namespace syge::detail {

// gzgets-based line reader; zlib reads plain (uncompressed) files transparently
class GzLineReader {
 public:
  explicit GzLineReader(const std::string& path) : path_(path), f_(gzopen(path.c_str(), "rb")) {
    if (!f_) throw io_error("cannot open " + path);
  }
  ~GzLineReader() {
    if (f_) gzclose(f_);
  }
  GzLineReader(const GzLineReader&) = delete;
  GzLineReader& operator=(const GzLineReader&) = delete;

  // strips trailing newline (and CR); false at EOF
  bool next(std::string& line) {
    line.clear();
    char buf[4096];
    bool got = false;
    while (gzgets(f_, buf, sizeof buf)) {
      got = true;
      line.append(buf);
      if (!line.empty() && line.back() == '\n') {
        line.pop_back();
        break;
      }
    }
    if (!got) {
      int errnum = 0;
      const char* msg = gzerror(f_, &errnum);
      if (errnum != Z_OK && errnum != Z_STREAM_END)
        throw io_error("read error in " + path_ + ": " + (msg ? msg : "unknown"));
      return false;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

 private:
  std::string path_;
  gzFile f_;
};

}  // namespace syge::detail
