#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace repgraph {

struct FastaRecord {
  std::string id;
  std::string sequence;
};

struct FastqRecord {
  std::string id;
  std::string sequence;
};

std::vector<FastaRecord> read_fasta(const std::filesystem::path& path);
std::vector<FastaRecord> read_fasta(std::istream& in, const std::string& name);

// Sequences wrapped at `width` columns; width 0 writes one line per record.
void write_fasta(const std::filesystem::path& path,
                 const std::vector<FastaRecord>& records, size_t width = 80);

std::vector<FastqRecord> read_fastq(const std::filesystem::path& path);

// Splits a line on single tabs; no quoting or escapes.
std::vector<std::string> split_tsv(const std::string& line);

void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

void ensure_directory(const std::filesystem::path& dir);

}  // namespace repgraph
