// weaknet: generate property-campaign instances and verify them.
//
//   weaknet gen <kind> --config <file> --out <file>
//   weaknet verify <suite> --config <file> --instances <file> --report <file>
//
// Exit codes: 0 all pass, 1 some violation, 2 config or schema error.

#include "weaknet/harness/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace weaknet::harness;
using weaknet::Json;
using weaknet::SchemaError;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

std::vector<Json> parse_instances(const std::string& text) {
  std::vector<Json> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw SchemaError("instances line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

int gen(const std::string& kind, const std::string& config, const std::string& out_path) {
  const Suite& suite = find_suite(kind);
  const Config cfg = load_config(suite, read_file(config));
  std::string body;
  for (const auto& inst : suite.generate(cfg)) body += inst.dump() + "\n";
  write_file(out_path, body);
  return 0;
}

int verify(const std::string& name, const std::string& config, const std::string& instances, const std::string& report) {
  const Suite& suite = find_suite(name);
  const Config cfg = load_config(suite, read_file(config));
  const auto insts = parse_instances(read_file(instances));
  std::vector<Record> records;
  const double total = timed([&] { records = run_suite(suite, cfg, insts); });

  std::string timings;
  std::size_t failed = 0;
  for (const auto& r : records) {
    if (!r.pass) ++failed;
    std::ostringstream t;
    t << r.body["id"].dump() << " " << std::fixed << std::setprecision(6) << r.seconds << "\n";
    timings += t.str();
  }
  const std::string body = render_report(suite, cfg, records);
  {
    std::ostringstream t;
    t << "total " << std::fixed << std::setprecision(6) << total << "\n";
    timings += t.str();
  }
  write_file(report, body);
  write_file(report + ".timings", timings);
  std::cout << suite.name << ": " << records.size() - failed << "/" << records.size() << " passed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weaknet property campaigns"};
  app.require_subcommand(1);

  std::string kind, suite, config, out, instances, report;
  auto* g = app.add_subcommand("gen", "generate instances");
  g->add_option("kind", kind, "instance kind or suite name")->required();
  g->add_option("--config", config, "key-value config file")->required();
  g->add_option("--out", out, "output file, one JSON instance per line")->required();

  auto* v = app.add_subcommand("verify", "verify instances");
  v->add_option("suite", suite, "suite name")->required();
  v->add_option("--config", config, "key-value config file")->required();
  v->add_option("--instances", instances, "instances file")->required();
  v->add_option("--report", report, "report file; timings go to <report>.timings")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*g) return gen(kind, config, out);
    return verify(suite, config, instances, report);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
