#include "aakmer/seqio.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <streambuf>
#include <unistd.h>

#include "aakmer/error.hpp"

namespace aakmer::seqio {

namespace {

// Line 0 means the position is unknown.
std::string at_line(std::size_t line) {
  return line == 0 ? std::string() : "line " + std::to_string(line) + ": ";
}

// Uppercases in place and validates; throws with the offending line.
void normalize(std::string& text, std::size_t begin, Alphabet alphabet, std::size_t line) {
  for (std::size_t i = begin; i < text.size(); ++i) {
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[i])));
    bool ok = false;
    if (alphabet == Alphabet::dna) {
      ok = c == 'A' || c == 'C' || c == 'G' || c == 'T' || c == 'N';
    } else if (c == 'B' || c == 'J' || c == 'O' || c == 'U' || c == 'Z') {
      c = 'X';
      ok = true;
    } else {
      ok = c == '*' || c == 'X' || std::string_view("ACDEFGHIKLMNPQRSTVWY").find(c) != std::string_view::npos;
    }
    if (!ok) {
      throw InputError(at_line(line) + "illegal character '" + std::string(1, text[i]) + "'");
    }
    text[i] = c;
  }
}

void chomp(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::string first_token(std::string_view header) {
  const auto end = header.find_first_of(" \t");
  return std::string(header.substr(0, end));
}

class GzStreamBuf : public std::streambuf {
 public:
  explicit GzStreamBuf(gzFile file) : file_(file) {}
  ~GzStreamBuf() override { gzclose(file_); }
  GzStreamBuf(const GzStreamBuf&) = delete;
  GzStreamBuf& operator=(const GzStreamBuf&) = delete;

 protected:
  int_type underflow() override {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    const int n = gzread(file_, buffer_.data(), static_cast<unsigned>(buffer_.size()));
    if (n < 0) {
      int code = 0;
      throw InputError(std::string("decompression failed: ") + gzerror(file_, &code));
    }
    if (n == 0) return traits_type::eof();
    setg(buffer_.data(), buffer_.data(), buffer_.data() + n);
    return traits_type::to_int_type(*gptr());
  }

 private:
  gzFile file_;
  std::array<char, 1 << 16> buffer_{};
};

class GzInputStream : public std::istream {
 public:
  explicit GzInputStream(gzFile file) : std::istream(nullptr), buf_(file) {
    rdbuf(&buf_);
    exceptions(std::ios::badbit);
  }

 private:
  GzStreamBuf buf_;
};

}  // namespace

std::string IdRegistry::admit(std::string id, std::size_t line) {
  if (id.empty()) throw InputError(at_line(line) + "empty record id");
  if (seen_.insert(id).second) return id;
  if (policy_ == DuplicatePolicy::reject) {
    throw InputError(at_line(line) + "duplicate id '" + id + "'");
  }
  for (std::size_t n = 2;; ++n) {
    std::string candidate = id + "." + std::to_string(n);
    if (seen_.insert(candidate).second) return candidate;
  }
}

FastaReader::FastaReader(std::istream& in, Alphabet alphabet, DuplicatePolicy policy)
    : in_(in), alphabet_(alphabet), ids_(policy) {}

std::optional<Read> FastaReader::next() {
  std::string line;
  while (!header_) {
    if (!std::getline(in_, line)) return std::nullopt;
    ++line_;
    chomp(line);
    if (line.empty()) continue;
    if (line[0] != '>') throw InputError(at_line(line_) + "expected '>' header");
    header_ = line.substr(1);
    header_line_ = line_;
  }

  Read read;
  read.id = ids_.admit(first_token(*header_), header_line_);
  header_.reset();
  while (std::getline(in_, line)) {
    ++line_;
    chomp(line);
    if (line.empty()) continue;
    if (line[0] == '>') {
      header_ = line.substr(1);
      header_line_ = line_;
      break;
    }
    const std::size_t begin = read.seq.size();
    read.seq += line;
    normalize(read.seq, begin, alphabet_, line_);
  }
  if (read.seq.empty()) {
    throw InputError(at_line(header_line_) + "empty record '" + read.id + "'");
  }
  return read;
}

FastqReader::FastqReader(std::istream& in, DuplicatePolicy policy) : in_(in), ids_(policy) {}

bool FastqReader::getline(std::string& line) {
  if (!std::getline(in_, line)) return false;
  ++line_;
  chomp(line);
  return true;
}

std::optional<Read> FastqReader::next() {
  std::string header;
  do {
    if (!getline(header)) return std::nullopt;
  } while (header.empty());
  if (header[0] != '@') throw InputError(at_line(line_) + "expected '@' header");
  const std::size_t header_line = line_;

  Read read;
  std::string plus;
  std::string qual;
  if (!getline(read.seq) || !getline(plus) || !getline(qual)) {
    throw InputError(at_line(header_line) + "truncated FASTQ record");
  }
  if (plus.empty() || plus[0] != '+') throw InputError(at_line(line_ - 1) + "expected '+' separator");
  if (read.seq.empty()) throw InputError(at_line(header_line + 1) + "empty record");
  normalize(read.seq, 0, Alphabet::dna, header_line + 1);
  if (qual.size() != read.seq.size()) {
    throw InputError(at_line(line_) + "quality length " + std::to_string(qual.size()) +
                     " does not match sequence length " + std::to_string(read.seq.size()));
  }
  read.qual = std::move(qual);
  read.id = ids_.admit(first_token(std::string_view(header).substr(1)), header_line);
  return read;
}

std::vector<Read> parse_fasta(std::istream& in, Alphabet alphabet, DuplicatePolicy policy) {
  std::vector<Read> reads;
  FastaReader reader(in, alphabet, policy);
  while (auto r = reader.next()) reads.push_back(std::move(*r));
  return reads;
}

std::vector<Read> parse_fastq(std::istream& in, DuplicatePolicy policy) {
  std::vector<Read> reads;
  FastqReader reader(in, policy);
  while (auto r = reader.next()) reads.push_back(std::move(*r));
  return reads;
}

std::vector<Read> parse_sequences(std::istream& in, Alphabet alphabet, DuplicatePolicy policy) {
  in >> std::ws;
  const int c = in.peek();
  if (c == '@') {
    if (alphabet != Alphabet::dna) throw InputError("FASTQ input must be DNA");
    return parse_fastq(in, policy);
  }
  if (c == std::char_traits<char>::eof()) return {};
  return parse_fasta(in, alphabet, policy);
}

void write_fastq(std::span<const Read> reads, std::ostream& out) {
  for (const Read& r : reads) {
    out << '@' << r.id << '\n' << r.seq << "\n+\n";
    if (r.qual) {
      out << *r.qual;
    } else {
      out << std::string(r.seq.size(), kDefaultQuality);
    }
    out << '\n';
  }
  if (!out) throw Error("write failed");
}

void write_fasta(std::span<const Read> reads, std::ostream& out, std::size_t width) {
  for (const Read& r : reads) {
    out << '>' << r.id << '\n';
    for (std::size_t i = 0; i < r.seq.size(); i += width) {
      out << std::string_view(r.seq).substr(i, width) << '\n';
    }
  }
  if (!out) throw Error("write failed");
}

std::unique_ptr<std::istream> open_input(const std::string& path) {
  gzFile file = nullptr;
  if (path == "-") {
    const int fd = ::dup(STDIN_FILENO);
    if (fd >= 0) file = gzdopen(fd, "rb");
  } else {
    file = gzopen(path.c_str(), "rb");
  }
  if (file == nullptr) throw InputError("cannot open '" + path + "' for reading");
  return std::make_unique<GzInputStream>(file);
}

std::unique_ptr<std::ostream> open_output(const std::string& path) {
  if (path == "-") return std::make_unique<std::ostream>(std::cout.rdbuf());
  auto out = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*out) throw InputError("cannot open '" + path + "' for writing");
  return out;
}

std::vector<Read> read_sequence_file(const std::string& path, Alphabet alphabet,
                                     DuplicatePolicy policy) {
  auto in = open_input(path);
  try {
    return parse_sequences(*in, alphabet, policy);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace aakmer::seqio
