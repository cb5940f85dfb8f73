#include "aakmer/refdb.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>

#include "aakmer/digest.hpp"
#include "aakmer/error.hpp"

namespace aakmer::refdb {

namespace {

// File layout, all integers little-endian:
//   magic[8] "AAKMERDB"
//   u32 version, u32 k, u32 input kind
//   u64 build time, u64 source digest
//   u64 rows; per row: u32 length + label bytes
//   u64 organisms; per organism: u32 length + name bytes
//   per row: u32 organism index
//   u64 triples; per triple: u32 row, u32 kmer, u32 count (row-major, ascending)
//   u32 degree mode; u64 degree entries; per entry: u32 kmer, u64 degree
//   u8 filtered; if 1: f64 bottom, f64 top, u32 basis, u32 mode,
//                      u64 keep size, u32 kmer each
//   u32 CRC-32 of every preceding byte
constexpr char kMagic[8] = {'A', 'A', 'K', 'M', 'E', 'R', 'D', 'B'};

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    buf_.insert(buf_.end(), b, b + n);
  }
  template <typename T>
  void le(T value) {
    static_assert(std::is_integral_v<T>);
    using U = std::make_unsigned_t<T>;
    auto v = static_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      buf_.push_back(static_cast<std::uint8_t>(v & 0xffU));
      v = static_cast<U>(v >> 8);
    }
  }
  void f64(double d) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &d, sizeof bits);
    le(bits);
  }
  void str(const std::string& s) {
    le(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  std::vector<std::uint8_t>& buffer() { return buf_; }

 private:
  std::vector<std::uint8_t> buf_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw FormatError("reference db is truncated");
  }
  template <typename T>
  T le() {
    need(sizeof(T));
    std::make_unsigned_t<T> v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<std::make_unsigned_t<T>>(static_cast<std::make_unsigned_t<T>>(bytes_[pos_ + i]) << (8 * i));
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }
  double f64() {
    const auto bits = le<std::uint64_t>();
    double d = 0;
    std::memcpy(&d, &bits, sizeof d);
    return d;
  }
  std::string str() {
    const auto n = le<std::uint32_t>();
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  // Guards element counts read from the file against the remaining bytes.
  std::size_t count(std::size_t element_size) {
    const auto n = le<std::uint64_t>();
    if (element_size != 0 && n > (bytes_.size() - pos_) / element_size) {
      throw FormatError("reference db is truncated");
    }
    return static_cast<std::size_t>(n);
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t crc_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths.
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - pos, 1U << 30));
    crc = crc32(crc, bytes.data() + pos, chunk);
    pos += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::uint64_t build_time_from_env() {
  const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
  if (epoch == nullptr || *epoch == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(epoch, &end, 10);
  if (*end != '\0') throw InputError("SOURCE_DATE_EPOCH is not an integer");
  return v;
}

}  // namespace

OrganismMap read_organism_tsv(std::istream& in) {
  OrganismMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw InputError("organism table line " + std::to_string(line_no) +
                       ": expected 'reference_id<TAB>organism'");
    }
    map[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return map;
}

std::pair<std::string, std::string> resolve_reference(const std::string& token,
                                                      const OrganismMap& organisms) {
  const auto bar = token.find('|');
  std::string label = token.substr(0, bar);
  std::string organism = bar == std::string::npos ? std::string() : token.substr(bar + 1);
  if (auto it = organisms.find(label); it != organisms.end()) {
    organism = it->second;
  } else if (auto full = organisms.find(token); full != organisms.end()) {
    organism = full->second;
  }
  if (label.empty()) throw InputError("empty reference id in '" + token + "'");
  if (organism.empty()) throw InputError("unknown organism for reference id '" + label + "'");
  return {std::move(label), std::move(organism)};
}

ReferenceDB build(std::span<const seqio::Read> references, const OrganismMap& organisms,
                  InputKind kind, int k) {
  if (references.empty()) throw InputError("empty reference set");
  const kmer::KmerCodec codec(k);

  std::vector<seqio::Read> relabeled;
  relabeled.reserve(references.size());
  std::vector<std::string> organism_names;
  Fnv1a digest;
  digest.field(std::to_string(k));
  digest.field(kind == InputKind::dna ? "dna" : "protein");
  for (const seqio::Read& r : references) {
    auto [label, organism] = resolve_reference(r.id, organisms);
    digest.field(label);
    digest.field(organism);
    digest.field(r.seq);
    relabeled.push_back({std::move(label), r.seq, std::nullopt});
    organism_names.push_back(std::move(organism));
  }

  ReferenceDB db;
  db.array = kind == InputKind::dna ? from_reads(relabeled, codec) : from_proteins(relabeled, codec);
  db.organisms = organism_names;
  std::sort(db.organisms.begin(), db.organisms.end());
  db.organisms.erase(std::unique(db.organisms.begin(), db.organisms.end()), db.organisms.end());
  for (const std::string& name : organism_names) {
    const auto it = std::lower_bound(db.organisms.begin(), db.organisms.end(), name);
    db.organism_index.push_back(static_cast<std::uint32_t>(it - db.organisms.begin()));
  }
  db.degrees = column_sums(db.array, DegreeMode::presence);
  db.meta = {static_cast<std::uint32_t>(k), kind, build_time_from_env(), digest.value()};
  return db;
}

ReferenceDB apply_filter(const ReferenceDB& db, const degree::FilterSpec& spec) {
  if (db.filter) throw InputError("reference db is already filtered; filters do not compose");
  spec.validate();
  const DegreeTable table =
      spec.mode == DegreeMode::presence ? db.degrees : column_sums(db.array, DegreeMode::occurrence);
  ReferenceDB out = db;
  KmerSet keep = degree::keep_set(table, spec);
  out.array = select_columns(db.array, keep);
  out.filter = spec;
  out.keep = std::move(keep);
  return out;
}

std::vector<std::uint8_t> serialize(const ReferenceDB& db) {
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.le(kFormatVersion);
  w.le(db.meta.k);
  w.le(static_cast<std::uint32_t>(db.meta.kind));
  w.le(db.meta.build_time);
  w.le(db.meta.source_digest);

  const AssocArray& arr = db.array;
  w.le(static_cast<std::uint64_t>(arr.num_rows()));
  for (const std::string& label : arr.row_labels()) w.str(label);
  w.le(static_cast<std::uint64_t>(db.organisms.size()));
  for (const std::string& name : db.organisms) w.str(name);
  for (std::uint32_t idx : db.organism_index) w.le(idx);

  w.le(static_cast<std::uint64_t>(arr.nnz()));
  for (std::size_t i = 0; i < arr.num_rows(); ++i) {
    for (const Entry& e : arr.row(i)) {
      w.le(static_cast<std::uint32_t>(i));
      w.le(e.col);
      w.le(e.count);
    }
  }

  w.le(static_cast<std::uint32_t>(db.degrees.mode));
  w.le(static_cast<std::uint64_t>(db.degrees.size()));
  for (const auto& [k, deg] : db.degrees.degrees) {
    w.le(k);
    w.le(deg);
  }

  w.le(static_cast<std::uint8_t>(db.filter ? 1 : 0));
  if (db.filter) {
    w.f64(db.filter->bottom);
    w.f64(db.filter->top);
    w.le(static_cast<std::uint32_t>(db.filter->basis));
    w.le(static_cast<std::uint32_t>(db.filter->mode));
    const KmerSet& keep = db.keep.value();
    w.le(static_cast<std::uint64_t>(keep.size()));
    for (KmerId k : keep) w.le(k);
  }
  w.le(crc_of(w.buffer()));
  return std::move(w.buffer());
}

ReferenceDB deserialize(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.need(sizeof kMagic);
  if (!std::equal(bytes.begin(), bytes.begin() + sizeof kMagic, kMagic)) {
    throw FormatError("not a reference db (bad magic)");
  }
  Reader header(bytes.subspan(sizeof kMagic));
  const auto version = header.le<std::uint32_t>();
  if (version != kFormatVersion) {
    throw VersionError("reference db format version " + std::to_string(version) +
                       " is not supported (expected " + std::to_string(kFormatVersion) + ")");
  }
  if (bytes.size() < sizeof kMagic + 4 + 4) throw FormatError("reference db is truncated");
  const auto body = bytes.first(bytes.size() - 4);
  Reader tail(bytes.last(4));
  if (crc_of(body) != tail.le<std::uint32_t>()) throw ChecksumError("reference db checksum mismatch");

  Reader in(body.subspan(sizeof kMagic + 4));
  ReferenceDB db;
  db.meta.k = in.le<std::uint32_t>();
  const std::uint32_t columns = kmer::vocabulary_size(static_cast<int>(db.meta.k));
  const auto kind = in.le<std::uint32_t>();
  if (kind > 1) throw FormatError("unknown input kind in reference db");
  db.meta.kind = static_cast<InputKind>(kind);
  db.meta.build_time = in.le<std::uint64_t>();
  db.meta.source_digest = in.le<std::uint64_t>();

  std::vector<std::string> labels(in.count(4));
  for (std::string& label : labels) label = in.str();
  db.organisms.resize(in.count(4));
  for (std::string& name : db.organisms) name = in.str();
  db.organism_index.resize(labels.size());
  for (std::uint32_t& idx : db.organism_index) {
    idx = in.le<std::uint32_t>();
    if (idx >= db.organisms.size()) throw FormatError("organism index out of range");
  }

  std::vector<Row> rows(labels.size());
  const std::size_t triples = in.count(12);
  std::uint32_t last_row = 0;
  for (std::size_t t = 0; t < triples; ++t) {
    const auto row = in.le<std::uint32_t>();
    const auto col = in.le<std::uint32_t>();
    const auto count = in.le<std::uint32_t>();
    if (row >= rows.size() || row < last_row) throw FormatError("triples out of order");
    last_row = row;
    rows[row].push_back({col, count});
  }
  db.array = AssocArray(columns);
  for (std::size_t i = 0; i < labels.size(); ++i) db.array.append_row(labels[i], std::move(rows[i]));

  const auto mode = in.le<std::uint32_t>();
  if (mode > 1) throw FormatError("unknown degree mode in reference db");
  db.degrees.mode = static_cast<DegreeMode>(mode);
  db.degrees.degrees.resize(in.count(12));
  for (auto& [k, deg] : db.degrees.degrees) {
    k = in.le<std::uint32_t>();
    deg = in.le<std::uint64_t>();
  }

  if (in.le<std::uint8_t>() == 1) {
    degree::FilterSpec spec;
    spec.bottom = in.f64();
    spec.top = in.f64();
    spec.basis = static_cast<degree::FractionBasis>(in.le<std::uint32_t>());
    spec.mode = static_cast<DegreeMode>(in.le<std::uint32_t>());
    db.filter = spec;
    KmerSet keep(in.count(4));
    for (KmerId& k : keep) k = in.le<std::uint32_t>();
    db.keep = std::move(keep);
  }
  if (in.remaining() != 0) throw FormatError("trailing bytes in reference db");
  return db;
}

void save(const ReferenceDB& db, const std::string& path) {
  const std::vector<std::uint8_t> bytes = serialize(db);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write to '" + path + "' failed");
}

ReferenceDB load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "' for reading");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  try {
    return deserialize(bytes);
  } catch (const FormatError& e) {
    // Keep the concrete error type.
    if (dynamic_cast<const ChecksumError*>(&e)) throw ChecksumError(path + ": " + e.what());
    if (dynamic_cast<const VersionError*>(&e)) throw VersionError(path + ": " + e.what());
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace aakmer::refdb
