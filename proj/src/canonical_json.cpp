#include "shadowtrace/canonical_json.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "shadowtrace/errors.hpp"

namespace shadowtrace {

namespace {

void append_double(std::string& out, double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::SchemaMismatch, "non-finite number is not serializable");
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  out += buf;
  // Fixed-point integers like 2 print as "2"; keep that form, it reparses as
  // an integer-valued double and reprints identically.
}

void append_canonical(std::string& out, const json& value) {
  switch (value.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {  // std::map order
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        append_canonical(out, it.value());
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i > 0) out += ',';
        append_canonical(out, value[i]);
      }
      out += ']';
      break;
    }
    case json::value_t::string:
      out += value.dump();
      break;
    case json::value_t::boolean:
      out += value.get<bool>() ? "true" : "false";
      break;
    case json::value_t::number_integer: {
      char buf[24];
      std::snprintf(buf, sizeof(buf), "%" PRId64, value.get<std::int64_t>());
      out += buf;
      break;
    }
    case json::value_t::number_unsigned: {
      char buf[24];
      std::snprintf(buf, sizeof(buf), "%" PRIu64, value.get<std::uint64_t>());
      out += buf;
      break;
    }
    case json::value_t::number_float:
      append_double(out, value.get<double>());
      break;
    case json::value_t::null:
      out += "null";
      break;
    default:
      throw Error(ErrorCode::ParseError, "unsupported JSON value type");
  }
}

}  // namespace

std::string dump_canonical(const json& value) {
  std::string out;
  append_canonical(out, value);
  return out;
}

std::string dump_canonical_lines(const std::vector<json>& records) {
  std::string out;
  for (const json& record : records) {
    append_canonical(out, record);
    out += '\n';
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream stream(path, std::ios::binary | std::ios::trunc);
  if (!stream) {
    throw Error(ErrorCode::IoError, "cannot open for writing: " + path.string());
  }
  stream.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!stream) {
    throw Error(ErrorCode::IoError, "write failed: " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) {
    throw Error(ErrorCode::IoError, "cannot open for reading: " + path.string());
  }
  std::ostringstream out;
  out << stream.rdbuf();
  return out.str();
}

json parse_json(const std::string& text, const std::string& context) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, context + ": " + e.what());
  }
}

std::vector<json> parse_json_lines(const std::string& text, const std::string& context) {
  std::vector<json> records;
  std::istringstream stream(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::ParseError,
                  context + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace shadowtrace
