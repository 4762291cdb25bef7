#include "covmeas/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json_io.hpp"

namespace covmeas {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_integer(std::string_view key, std::string_view v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw DomainError("'" + std::string(key) + "' expects an integer, got '" + std::string(v) + "'");
  return out;
}

void set_protocol_key(ProtocolSpec& p, std::string_view key, std::string_view v) {
  if (key == "kind") p.kind = parse_protocol_kind(v);
  else if (key == "num_spins") p.num_spins = parse_integer<int>(key, v);
  else if (key == "encoding") p.encoding = parse_encoding(v);
  else if (key == "decoder") p.decoder = parse_decoder(v);
  else if (key == "tie_break") p.tie_break = parse_tie_break(v);
  else throw DomainError("unknown key '" + std::string(key) + "' in [protocol]");
}

void set_run_key(RunConfig& c, std::string_view key, std::string_view v) {
  if (key == "trials") c.trials = parse_integer<std::int64_t>(key, v);
  else if (key == "seed") c.seed = parse_integer<std::uint64_t>(key, v);
  else if (key == "n_theta") c.n_theta = parse_integer<int>(key, v);
  else if (key == "n_phi") c.n_phi = parse_integer<int>(key, v);
  else if (key == "threads") c.threads = parse_integer<int>(key, v);
  else if (key == "output") c.output = std::string(v);
  else throw DomainError("unknown key '" + std::string(key) + "' in [run]");
}

RunConfig parse_ini(std::string_view text) {
  RunConfig c;
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const auto hash = line.find_first_of("#;");
    line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw DomainError(where + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "protocol" && section != "run") throw DomainError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw DomainError(where + "expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (section.empty()) throw DomainError(where + "key outside of a section");
    try {
      if (section == "protocol") set_protocol_key(c.protocol, key, value);
      else set_run_key(c, key, value);
    } catch (const DomainError& e) {
      throw DomainError(where + e.what());
    }
  }
  return c;
}

}  // namespace

namespace detail {

Json config_to_json(const RunConfig& c) {
  Json j;
  j["protocol"] = {{"kind", to_string(c.protocol.kind)},
                   {"num_spins", c.protocol.num_spins},
                   {"encoding", to_string(c.protocol.encoding)},
                   {"decoder", to_string(c.protocol.decoder)},
                   {"tie_break", to_string(c.protocol.tie_break)}};
  j["run"] = {{"trials", c.trials}, {"seed", c.seed},       {"n_theta", c.n_theta},
              {"n_phi", c.n_phi},   {"threads", c.threads}, {"output", c.output}};
  return j;
}

RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [section, body] : j.items()) {
      if (!body.is_object()) throw DomainError("section '" + section + "' must be an object");
      for (const auto& [key, v] : body.items()) {
        const std::string text = v.is_string() ? v.get<std::string>() : v.dump();
        if (section == "protocol") set_protocol_key(c.protocol, key, text);
        else if (section == "run") set_run_key(c, key, text);
        else throw DomainError("unknown section '" + section + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed config: ") + e.what());
  }
  return c;
}

}  // namespace detail

RunConfig parse_run_config(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    detail::Json j;
    try {
      j = detail::Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw DomainError(std::string("malformed JSON config: ") + e.what());
    }
    return detail::config_from_json(j);
  }
  return parse_ini(text);
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string format_run_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[protocol]\n"
     << "kind = " << to_string(c.protocol.kind) << '\n'
     << "num_spins = " << c.protocol.num_spins << '\n'
     << "encoding = " << to_string(c.protocol.encoding) << '\n'
     << "decoder = " << to_string(c.protocol.decoder) << '\n'
     << "tie_break = " << to_string(c.protocol.tie_break) << "\n\n"
     << "[run]\n"
     << "trials = " << c.trials << '\n'
     << "seed = " << c.seed << '\n'
     << "n_theta = " << c.n_theta << '\n'
     << "n_phi = " << c.n_phi << '\n'
     << "threads = " << c.threads << '\n';
  if (!c.output.empty()) os << "output = " << c.output << '\n';
  return os.str();
}

}  // namespace covmeas
