#include "repgraph/io.hpp"

#include <fstream>
#include <sstream>

#include "repgraph/dna.hpp"
#include "repgraph/errors.hpp"

namespace repgraph {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

void check_sequence(const std::string& seq, const std::string& name, size_t line_no) {
  if (!valid_dna(seq))
    throw ParseError(name + ":" + std::to_string(line_no) +
                     ": sequence contains characters outside ACGT");
}

}  // namespace

std::vector<FastaRecord> read_fasta(std::istream& in, const std::string& name) {
  std::vector<FastaRecord> records;
  std::string line;
  size_t line_no = 0;
  size_t seq_start_line = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '>') {
      std::string id = line.substr(1, line.find_first_of(" \t") - 1);
      if (id.empty())
        throw ParseError(name + ":" + std::to_string(line_no) + ": empty FASTA id");
      records.push_back({id, {}});
      seq_start_line = line_no + 1;
    } else {
      if (records.empty())
        throw ParseError(name + ":" + std::to_string(line_no) +
                         ": sequence data before first header");
      records.back().sequence += line;
    }
  }
  for (auto& r : records) {
    if (r.sequence.empty())
      throw ParseError(name + ": record '" + r.id + "' has no sequence");
    check_sequence(r.sequence, name, seq_start_line);
  }
  return records;
}

std::vector<FastaRecord> read_fasta(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_fasta(in, path.string());
}

void write_fasta(const std::filesystem::path& path,
                 const std::vector<FastaRecord>& records, size_t width) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  for (const auto& r : records) {
    out << '>' << r.id << '\n';
    if (width == 0) {
      out << r.sequence << '\n';
    } else {
      for (size_t i = 0; i < r.sequence.size(); i += width)
        out << r.sequence.substr(i, width) << '\n';
    }
  }
}

std::vector<FastqRecord> read_fastq(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<FastqRecord> records;
  std::string header, seq, plus, qual;
  size_t line_no = 0;
  const std::string name = path.string();
  while (std::getline(in, header)) {
    ++line_no;
    if (header.empty()) continue;
    if (header[0] != '@')
      throw ParseError(name + ":" + std::to_string(line_no) + ": expected '@' header");
    if (!std::getline(in, seq) || !std::getline(in, plus) || !std::getline(in, qual))
      throw ParseError(name + ":" + std::to_string(line_no) + ": truncated FASTQ record");
    line_no += 3;
    if (plus.empty() || plus[0] != '+')
      throw ParseError(name + ":" + std::to_string(line_no - 1) + ": expected '+' separator");
    if (qual.size() != seq.size())
      throw ParseError(name + ":" + std::to_string(line_no) + ": quality length mismatch");
    check_sequence(seq, name, line_no - 2);
    records.push_back({header.substr(1, header.find_first_of(" \t") - 1), seq});
  }
  return records;
}

std::vector<std::string> split_tsv(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  for (;;) {
    size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << contents;
}

std::string read_text_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace repgraph
