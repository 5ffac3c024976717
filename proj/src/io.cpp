#include "genpair/io.hpp"

#include "genpair/error.hpp"

#include <zlib.h>

#include <array>
#include <cctype>
#include <cstring>
#include <fstream>
#include <streambuf>

namespace genpair {

namespace {

/// Replays a few already-consumed bytes, then continues from the underlying stream.
class PrefixBuf final : public std::streambuf {
public:
  PrefixBuf(std::string prefix, std::istream& src) : prefix_(std::move(prefix)), src_(src) {}

  std::streamsize read_raw(char* dst, std::streamsize n) {
    std::streamsize got = 0;
    if (consumed_ < prefix_.size()) {
      const auto take = std::min<std::streamsize>(n, static_cast<std::streamsize>(prefix_.size() - consumed_));
      std::memcpy(dst, prefix_.data() + consumed_, static_cast<std::size_t>(take));
      consumed_ += static_cast<std::size_t>(take);
      got += take;
    }
    if (got < n && src_) {
      src_.read(dst + got, n - got);
      got += src_.gcount();
    }
    return got;
  }

  bool failed() const { return src_.bad(); }

protected:
  int_type underflow() override {
    const auto n = read_raw(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    if (n <= 0) {
      if (failed()) {
        throw IoError("read failed");
      }
      return traits_type::eof();
    }
    setg(buf_.data(), buf_.data(), buf_.data() + n);
    return traits_type::to_int_type(buf_[0]);
  }

private:
  std::string prefix_;
  std::size_t consumed_ = 0;
  std::istream& src_;
  std::array<char, 1 << 16> buf_{};
};

/// Inflates (possibly multi-member) gzip data from a PrefixBuf.
class GzipBuf final : public std::streambuf {
public:
  explicit GzipBuf(std::unique_ptr<PrefixBuf> raw) : raw_(std::move(raw)) {
    std::memset(&zs_, 0, sizeof zs_);
    if (inflateInit2(&zs_, 15 + 32) != Z_OK) {
      throw IoError("zlib initialisation failed");
    }
  }
  ~GzipBuf() override { inflateEnd(&zs_); }

protected:
  int_type underflow() override {
    while (true) {
      if (zs_.avail_in == 0 && !raw_eof_) {
        const auto n = raw_->read_raw(in_.data(), static_cast<std::streamsize>(in_.size()));
        if (raw_->failed()) {
          throw IoError("read failed");
        }
        raw_eof_ = n == 0;
        zs_.next_in = reinterpret_cast<Bytef*>(in_.data());
        zs_.avail_in = static_cast<uInt>(n);
      }
      if (zs_.avail_in == 0 && raw_eof_) {
        if (!member_done_) {
          throw IoError("gzip stream truncated");
        }
        return traits_type::eof();
      }
      zs_.next_out = reinterpret_cast<Bytef*>(out_.data());
      zs_.avail_out = static_cast<uInt>(out_.size());
      member_done_ = false;
      const int rc = inflate(&zs_, Z_NO_FLUSH);
      if (rc == Z_STREAM_END) {
        member_done_ = true;
        inflateReset(&zs_);
      } else if (rc != Z_OK && rc != Z_BUF_ERROR) {
        throw IoError(std::string("gzip decode error: ") + (zs_.msg ? zs_.msg : "unknown"));
      }
      const auto produced = out_.size() - zs_.avail_out;
      if (produced > 0) {
        setg(out_.data(), out_.data(), out_.data() + produced);
        return traits_type::to_int_type(out_[0]);
      }
    }
  }

private:
  std::unique_ptr<PrefixBuf> raw_;
  z_stream zs_;
  bool raw_eof_ = false;
  bool member_done_ = true;
  std::array<char, 1 << 16> in_{};
  std::array<char, 1 << 16> out_{};
};

class OwningIstream final : public std::istream {
public:
  explicit OwningIstream(std::unique_ptr<std::streambuf> buf) : std::istream(buf.get()), buf_(std::move(buf)) {}

private:
  std::unique_ptr<std::streambuf> buf_;
};

class FileIstream final : public std::istream {
public:
  FileIstream(std::unique_ptr<std::ifstream> file, std::unique_ptr<std::istream> inner)
      : std::istream(inner->rdbuf()), file_(std::move(file)), inner_(std::move(inner)) {}

private:
  std::unique_ptr<std::ifstream> file_;
  std::unique_ptr<std::istream> inner_;
};

void chomp(std::string& line) {
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
}

} // namespace

std::unique_ptr<std::istream> maybe_gunzip(std::istream& in) {
  std::string prefix;
  for (int i = 0; i < 2; ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) {
      break;
    }
    prefix.push_back(static_cast<char>(c));
  }
  if (in.bad()) {
    throw IoError("read failed");
  }
  const bool gz = prefix.size() == 2 && static_cast<unsigned char>(prefix[0]) == 0x1F &&
                  static_cast<unsigned char>(prefix[1]) == 0x8B;
  auto raw = std::make_unique<PrefixBuf>(std::move(prefix), in);
  if (gz) {
    return std::make_unique<OwningIstream>(std::make_unique<GzipBuf>(std::move(raw)));
  }
  return std::make_unique<OwningIstream>(std::move(raw));
}

std::unique_ptr<std::istream> open_input(const std::filesystem::path& path) {
  auto file = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*file) {
    throw IoError("cannot open " + path.string());
  }
  auto inner = maybe_gunzip(*file);
  return std::make_unique<FileIstream>(std::move(file), std::move(inner));
}

Reference parse_fasta(std::istream& raw) {
  auto in = maybe_gunzip(raw);
  Reference ref;
  std::string line;
  std::string name;
  PackedSequence seq;
  bool have_record = false;
  std::size_t line_no = 0;

  auto flush = [&] {
    if (have_record) {
      ref.add(std::move(name), seq);
      seq = PackedSequence();
    }
  };

  while (std::getline(*in, line)) {
    ++line_no;
    chomp(line);
    if (line.empty()) {
      continue;
    }
    if (line[0] == '>') {
      flush();
      const auto end = line.find_first_of(" \t", 1);
      name = line.substr(1, end == std::string::npos ? std::string::npos : end - 1);
      have_record = true;
      continue;
    }
    if (!have_record) {
      throw MalformedFasta(line_no);
    }
    for (char c : line) {
      const int code = char_to_code(c);
      if (code >= 0 && code < 4) {
        seq.push_back(static_cast<std::uint8_t>(code));
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '*' || c == '-') {
        // N and every IUPAC ambiguity code fold to N.
        seq.push_back_n();
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        throw MalformedFasta(line_no);
      }
    }
  }
  if (in->bad()) {
    throw IoError("error reading FASTA");
  }
  flush();
  return ref;
}

Reference read_fasta(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw IoError("cannot open " + path.string());
  }
  return parse_fasta(file);
}

std::string normalize_read_id(std::string_view name) {
  const auto ws = name.find_first_of(" \t");
  if (ws != std::string_view::npos) {
    name = name.substr(0, ws);
  }
  if (name.size() >= 2 && name[name.size() - 2] == '/' &&
      (name.back() == '1' || name.back() == '2')) {
    name.remove_suffix(2);
  }
  return std::string(name);
}

FastqPairReader::FastqPairReader(std::istream& in1, std::istream& in2)
    : in1_(maybe_gunzip(in1)), in2_(maybe_gunzip(in2)) {}

bool FastqPairReader::read_record(std::istream& in, std::size_t& line_no, Record& rec) {
  std::string header;
  while (true) {
    if (!std::getline(in, header)) {
      if (in.bad()) {
        throw IoError("error reading FASTQ");
      }
      return false;
    }
    ++line_no;
    chomp(header);
    if (!header.empty()) {
      break;
    }
  }
  if (header[0] != '@') {
    throw MalformedFastq(line_no, "expected '@' header");
  }
  std::string plus;
  if (!std::getline(in, rec.seq)) {
    throw MalformedFastq(line_no + 1, "missing sequence line");
  }
  ++line_no;
  chomp(rec.seq);
  if (!std::getline(in, plus)) {
    throw MalformedFastq(line_no + 1, "missing '+' line");
  }
  ++line_no;
  chomp(plus);
  if (plus.empty() || plus[0] != '+') {
    throw MalformedFastq(line_no, "expected '+' separator");
  }
  if (!std::getline(in, rec.qual)) {
    throw MalformedFastq(line_no + 1, "missing quality line");
  }
  ++line_no;
  chomp(rec.qual);
  if (rec.qual.size() != rec.seq.size()) {
    throw MalformedFastq(line_no, "quality length differs from sequence length");
  }
  rec.name = header.substr(1);
  return true;
}

std::optional<ReadPair> FastqPairReader::next() {
  Record r1;
  Record r2;
  const bool ok1 = read_record(*in1_, line1_, r1);
  const bool ok2 = read_record(*in2_, line2_, r2);
  if (ok1 != ok2) {
    throw RecordCountMismatch(records_);
  }
  if (!ok1) {
    return std::nullopt;
  }
  ReadPair pair;
  pair.id = normalize_read_id(r1.name);
  try {
    pair.read1 = PackedSequence::encode(r1.seq);
  } catch (const InvalidBase& e) {
    throw MalformedFastq(line1_ - 2, e.what());
  }
  try {
    pair.read2 = PackedSequence::encode(r2.seq);
  } catch (const InvalidBase& e) {
    throw MalformedFastq(line2_ - 2, e.what());
  }
  pair.qual1 = std::move(r1.qual);
  pair.qual2 = std::move(r2.qual);
  ++records_;
  return pair;
}

FastqPairFiles::FastqPairFiles(const std::filesystem::path& r1, const std::filesystem::path& r2)
    : in1_(open_input(r1)), in2_(open_input(r2)),
      reader_(std::make_unique<FastqPairReader>(*in1_, *in2_)) {}

TextSink::TextSink(const std::filesystem::path& path, bool gzip) {
  if (gzip) {
    gz_ = gzopen(path.c_str(), "wb6");
    if (gz_ == nullptr) {
      throw IoError("cannot open " + path.string() + " for writing");
    }
  } else {
    plain_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*plain_) {
      throw IoError("cannot open " + path.string() + " for writing");
    }
  }
}

TextSink::~TextSink() {
  try {
    close();
  } catch (...) {
  }
}

void TextSink::write(std::string_view text) {
  if (gz_ != nullptr) {
    if (!text.empty() &&
        gzwrite(static_cast<gzFile>(gz_), text.data(), static_cast<unsigned>(text.size())) == 0) {
      throw IoError("gzip write failed");
    }
  } else if (plain_) {
    plain_->write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!*plain_) {
      throw IoError("write failed");
    }
  }
}

void TextSink::close() {
  if (gz_ != nullptr) {
    const int rc = gzclose(static_cast<gzFile>(gz_));
    gz_ = nullptr;
    if (rc != Z_OK) {
      throw IoError("gzip close failed");
    }
  }
  if (plain_) {
    plain_->flush();
    plain_.reset();
  }
}

void write_fastq_record(std::string& out, std::string_view name, const PackedSequence& seq,
                        std::string_view qual) {
  out += '@';
  out += name;
  out += '\n';
  out += seq.decode();
  out += "\n+\n";
  if (qual.size() == seq.size()) {
    out += qual;
  } else {
    out.append(seq.size(), 'I');
  }
  out += '\n';
}

} // namespace genpair
