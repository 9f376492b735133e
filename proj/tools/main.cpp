// Command-line front end: PMF queries and tables, moments, sampling and
// convergence sweeps for the multivariate binomial and Poisson laws.
//
// Exit codes: 0 success, 1 usage error, 2 input validation error.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eventodist/binomial.hpp"
#include "eventodist/json_io.hpp"
#include "eventodist/lattice.hpp"
#include "eventodist/numeric.hpp"
#include "eventodist/poisson.hpp"
#include "eventodist/sampler.hpp"
#include "eventodist/table.hpp"

namespace ed = eventodist;

namespace {

enum class Precision { kDouble, kRational };

Precision precision_from_env() {
  const char* value = std::getenv("EVENTODIST_PRECISION");
  if (value == nullptr || std::string_view(value).empty()) return Precision::kDouble;
  const std::string_view mode(value);
  if (mode == "double") return Precision::kDouble;
  if (mode == "rational") return Precision::kRational;
  throw ed::ValidationError("EVENTODIST_PRECISION must be \"double\" or \"rational\", got \"" +
                            std::string(mode) + "\"");
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ed::ValidationError("cannot read input file \"" + path + "\"");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string::npos ? pos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::int64_t parse_int(const std::string& text, const std::string& what) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ed::ValidationError(what + ": \"" + text + "\" is not an integer");
  }
  return value;
}

/// Counts from "--at"; entries follow the canonical (lexicographic) label
/// order of the loaded event set.
ed::CountVector parse_at(const std::string& text, const ed::EventSet& events) {
  const auto parts = split(text, ',');
  if (parts.size() != events.size()) {
    throw ed::ValidationError("--at lists " + std::to_string(parts.size()) +
                              " counts, expected " + std::to_string(events.size()) +
                              " (one per event, canonical order)");
  }
  ed::CountVector counts;
  for (const auto& part : parts) counts.n.push_back(parse_int(part, "--at"));
  return counts;
}

/// Counts from "--at-named", e.g. "x=1,y=0"; order-free.
ed::CountVector parse_at_named(const std::string& text, const ed::EventSet& events) {
  std::vector<std::int64_t> counts(events.size(), 0);
  std::vector<bool> seen(events.size(), false);
  for (const auto& part : split(text, ',')) {
    const std::size_t eq = part.find('=');
    if (eq == std::string::npos) {
      throw ed::ValidationError("--at-named: \"" + part + "\" is not of the form label=count");
    }
    const std::size_t index = events.index_of(part.substr(0, eq));
    if (seen[index]) {
      throw ed::ValidationError("--at-named: duplicate label \"" + part.substr(0, eq) + "\"");
    }
    seen[index] = true;
    counts[index] = parse_int(part.substr(eq + 1), "--at-named");
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (!seen[i]) {
      throw ed::ValidationError("--at-named: missing count for event \"" + events.label(i) +
                                "\"");
    }
  }
  return ed::CountVector(std::move(counts));
}

ed::OutputTable::Format parse_format(const std::string& name) {
  if (name == "csv") return ed::OutputTable::Format::csv;
  if (name == "json") return ed::OutputTable::Format::json;
  throw ed::ValidationError("--format must be csv or json, got \"" + name + "\"");
}

struct CommonFlags {
  std::string input;
  std::string at;
  std::string at_named;
  std::string format = "csv";
  std::string out = "-";
  bool lenient = false;
};

ed::CountVector resolve_at(const CommonFlags& flags, const ed::EventSet& events) {
  if (flags.at.empty() == flags.at_named.empty()) {
    throw CLI::ValidationError("exactly one of --at / --at-named is required");
  }
  return flags.at.empty() ? parse_at_named(flags.at_named, events)
                          : parse_at(flags.at, events);
}

void print_scalar(double value) { std::cout << ed::format_shortest(value) << '\n'; }

// --- binomial -------------------------------------------------------------

void run_binomial_pmf(const CommonFlags& flags, std::int64_t trials) {
  const std::string text = read_input(flags.input);
  const ed::JsonOptions opts{.lenient = flags.lenient, .renormalize = false};
  if (precision_from_env() == Precision::kRational) {
    const ed::RationalBinomialMvSpec spec(ed::load_distribution_rational(text, opts), trials);
    const auto counts = resolve_at(flags, spec.dist.events());
    print_scalar(ed::to_double(ed::pmf(spec, counts)));
  } else {
    const ed::BinomialMvSpec spec(ed::load_distribution(text, opts), trials);
    const auto counts = resolve_at(flags, spec.dist.events());
    print_scalar(ed::pmf(spec, counts));
  }
}

template <class Spec>
ed::OutputTable binomial_table(const Spec& spec) {
  const auto& events = spec.dist.events();
  ed::OutputTable table;
  table.headers = events.labels();
  table.headers.push_back("probability");
  table.numeric_column.assign(table.headers.size(), true);
  for (std::size_t i = 0; i < events.size(); ++i) table.numeric_column[i] = true;

  ed::CountVector at(std::vector<std::int64_t>(events.size(), 0));
  while (true) {
    std::vector<std::string> row;
    row.reserve(events.size() + 1);
    for (auto v : at.n) row.push_back(std::to_string(v));
    row.push_back(ed::format_probability(ed::to_double(ed::pmf(spec, at))));
    table.add_row(std::move(row));
    // odometer, last coordinate fastest: lexicographic row order
    std::size_t i = events.size();
    while (i-- > 0) {
      if (++at.n[i] <= spec.trials) break;
      at.n[i] = 0;
      if (i == 0) return table;
    }
  }
}

void run_binomial_table(const CommonFlags& flags, std::int64_t trials) {
  const std::string text = read_input(flags.input);
  const ed::JsonOptions opts{.lenient = flags.lenient, .renormalize = false};
  ed::OutputTable table;
  if (precision_from_env() == Precision::kRational) {
    table = binomial_table(
        ed::RationalBinomialMvSpec(ed::load_distribution_rational(text, opts), trials));
  } else {
    table = binomial_table(ed::BinomialMvSpec(ed::load_distribution(text, opts), trials));
  }
  table.format = parse_format(flags.format);
  ed::emit_to(table, flags.out);
}

// --- poisson ----------------------------------------------------------------

void run_poisson_pmf(const CommonFlags& flags) {
  const ed::PoissonMvSpec spec(
      ed::load_intensities(read_input(flags.input), {.lenient = flags.lenient}));
  print_scalar(ed::pmf(spec, resolve_at(flags, spec.events())));
}

void run_poisson_table(const CommonFlags& flags, std::int64_t box) {
  const ed::PoissonMvSpec spec(
      ed::load_intensities(read_input(flags.input), {.lenient = flags.lenient}));
  if (box < 0) throw ed::ValidationError("--box must be nonnegative");
  const auto& events = spec.events();

  ed::OutputTable table;
  table.headers = events.labels();
  table.headers.push_back("probability");
  table.numeric_column.assign(table.headers.size(), true);
  ed::CountVector at(std::vector<std::int64_t>(events.size(), 0));
  while (true) {
    std::vector<std::string> row;
    for (auto v : at.n) row.push_back(std::to_string(v));
    row.push_back(ed::format_probability(ed::pmf(spec, at)));
    table.add_row(std::move(row));
    std::size_t i = events.size();
    bool done = true;
    while (i-- > 0) {
      if (++at.n[i] <= box) {
        done = false;
        break;
      }
      at.n[i] = 0;
    }
    if (done) break;
  }
  table.format = parse_format(flags.format);
  ed::emit_to(table, flags.out);
}

void run_poisson_converge(const CommonFlags& flags, const std::string& trials_list,
                          std::int64_t box) {
  const ed::PoissonIntensities intensities =
      ed::load_intensities(read_input(flags.input), {.lenient = flags.lenient});
  std::vector<std::int64_t> trials;
  for (const auto& part : split(trials_list, ',')) {
    trials.push_back(parse_int(part, "--trials"));
  }
  const auto rows = ed::convergence_report(intensities, trials, box);

  ed::OutputTable table;
  table.headers = {"n", "sup_deviation"};
  table.numeric_column = {true, true};
  for (const auto& row : rows) {
    table.add_row({std::to_string(row.trials), ed::format_probability(row.sup_deviation)});
  }
  table.format = parse_format(flags.format);
  ed::emit_to(table, flags.out);
}

// --- sampling ---------------------------------------------------------------

void run_sample_bernoulli(const CommonFlags& flags, std::int64_t trials, std::int64_t reps,
                          std::uint64_t seed) {
  const ed::BinomialMvSpec spec(
      ed::load_distribution(read_input(flags.input), {.lenient = flags.lenient}), trials);
  if (reps < 0) throw ed::ValidationError("--reps must be nonnegative");
  ed::BernoulliSchemeSampler sampler(spec, seed);

  ed::OutputTable table;
  table.headers = spec.dist.events().labels();
  table.numeric_column.assign(table.headers.size(), true);
  for (std::int64_t r = 0; r < reps; ++r) {
    const auto sample = sampler.next();
    std::vector<std::string> row;
    for (auto v : sample.n) row.push_back(std::to_string(v));
    table.add_row(std::move(row));
  }
  table.format = parse_format(flags.format);
  ed::emit_to(table, flags.out);
}

void run_sample_poisson(const CommonFlags& flags, std::int64_t reps, std::uint64_t seed) {
  const ed::PoissonMvSpec spec(
      ed::load_intensities(read_input(flags.input), {.lenient = flags.lenient}));
  if (reps < 0) throw ed::ValidationError("--reps must be nonnegative");
  ed::PoissonSampler sampler(spec, seed);

  ed::OutputTable table;
  table.headers = spec.events().labels();
  table.numeric_column.assign(table.headers.size(), true);
  for (std::int64_t r = 0; r < reps; ++r) {
    const auto sample = sampler.next();
    std::vector<std::string> row;
    for (auto v : sample.n) row.push_back(std::to_string(v));
    table.add_row(std::move(row));
  }
  table.format = parse_format(flags.format);
  ed::emit_to(table, flags.out);
}

// --- moments ----------------------------------------------------------------

template <class Spec>
ed::OutputTable binomial_moments(const Spec& spec) {
  const auto& events = spec.dist.events();
  ed::OutputTable table;
  table.headers = {"statistic", "event", "event2", "value"};
  table.numeric_column = {false, false, false, true};

  const auto mean = ed::mean_vector(spec);
  for (std::size_t i = 0; i < events.size(); ++i) {
    table.add_row({"mean", events.label(i), "", ed::format_probability(ed::to_double(mean[i]))});
  }
  const auto cov = ed::covariance_matrix(spec);
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (std::size_t j = 0; j < events.size(); ++j) {
      table.add_row({"covariance", events.label(i), events.label(j),
                     ed::format_probability(ed::to_double(cov.at(i, j)))});
    }
  }
  bool degenerate = false;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const double p = ed::to_double(ed::marginal_prob(spec.dist, i));
    if (p == 0.0 || p == 1.0) degenerate = true;
  }
  if (degenerate) {
    std::cerr << "note: a marginal probability is 0 or 1; standardized covariance omitted\n";
  } else {
    const auto std_cov = ed::standardized_covariance_matrix(spec);
    for (std::size_t i = 0; i < events.size(); ++i) {
      for (std::size_t j = 0; j < events.size(); ++j) {
        table.add_row({"standardized_covariance", events.label(i), events.label(j),
                       ed::format_probability(std_cov.at(i, j))});
      }
    }
  }
  return table;
}

void run_moments_binomial(const CommonFlags& flags, std::int64_t trials) {
  const std::string text = read_input(flags.input);
  const ed::JsonOptions opts{.lenient = flags.lenient, .renormalize = false};
  ed::OutputTable table;
  if (precision_from_env() == Precision::kRational) {
    table = binomial_moments(
        ed::RationalBinomialMvSpec(ed::load_distribution_rational(text, opts), trials));
  } else {
    table = binomial_moments(ed::BinomialMvSpec(ed::load_distribution(text, opts), trials));
  }
  table.format = parse_format(flags.format);
  ed::emit_to(table, flags.out);
}

void run_moments_poisson(const CommonFlags& flags) {
  const ed::PoissonMvSpec spec(
      ed::load_intensities(read_input(flags.input), {.lenient = flags.lenient}));
  const auto& events = spec.events();

  ed::OutputTable table;
  table.headers = {"statistic", "event", "event2", "value"};
  table.numeric_column = {false, false, false, true};
  const auto mean = ed::mean_vector(spec);
  for (std::size_t i = 0; i < events.size(); ++i) {
    table.add_row({"mean", events.label(i), "", ed::format_probability(mean[i])});
  }
  const auto cov = ed::covariance_matrix(spec);
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (std::size_t j = 0; j < events.size(); ++j) {
      table.add_row({"covariance", events.label(i), events.label(j),
                     ed::format_probability(cov.at(i, j))});
    }
  }
  table.format = parse_format(flags.format);
  ed::emit_to(table, flags.out);
}

// --- lattice ----------------------------------------------------------------

void run_lattice_count(const std::string& events_list, const std::string& target_list,
                       std::optional<std::int64_t> cap) {
  const auto labels = split(events_list, ',');
  const auto target_parts = split(target_list, ',');
  if (labels.size() != target_parts.size()) {
    throw ed::ValidationError("--target lists " + std::to_string(target_parts.size()) +
                              " counts for " + std::to_string(labels.size()) + " events");
  }
  // Targets are given in the order the events were typed; reorder to the
  // canonical order of the set.
  const ed::EventSet events(labels);
  std::vector<std::int64_t> target(events.size(), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    target[events.index_of(labels[i])] = parse_int(target_parts[i], "--target");
  }
  const ed::ConstraintSystem cs(events, ed::CountVector(std::move(target)), cap);
  std::cout << ed::solution_count(cs) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multivariate binomial and Poisson distributions generated by an "
               "eventological distribution {p(X)}"};
  app.require_subcommand(1);
  std::function<void()> action;

  CommonFlags flags;
  std::int64_t trials = 0;
  std::int64_t reps = 0;
  std::int64_t box = 6;
  std::uint64_t seed = 0;
  std::string trials_list;
  std::string events_list;
  std::string target_list;
  std::optional<std::int64_t> cap;

  const auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", flags.format, "Output format: csv or json")
        ->default_str("csv")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", flags.out, "Output destination: file path or - for stdout")
        ->default_str("-");
  };
  const auto add_at = [&](CLI::App* cmd) {
    cmd->add_option("--at", flags.at,
                    "Counts per event, comma-separated, canonical (sorted-label) order");
    cmd->add_option("--at-named", flags.at_named, "Counts as label=value pairs, any order");
  };
  const auto add_dist = [&](CLI::App* cmd) {
    cmd->add_option("--dist", flags.input, "Distribution JSON file (- for stdin)")->required();
    cmd->add_flag("--lenient", flags.lenient, "Default absent subset keys to 0");
  };
  const auto add_lambda = [&](CLI::App* cmd) {
    cmd->add_option("--lambda", flags.input, "Intensity JSON file (- for stdin)")->required();
    cmd->add_flag("--lenient", flags.lenient, "Default absent subset keys to 0");
  };

  auto* binomial = app.add_subcommand("binomial", "Multivariate binomial law");
  binomial->require_subcommand(1);
  auto* b_pmf = binomial->add_subcommand("pmf", "Probability of one count vector");
  add_dist(b_pmf);
  b_pmf->add_option("--trials", trials, "Number of experiments n")->required();
  add_at(b_pmf);
  b_pmf->callback([&] { action = [&] { run_binomial_pmf(flags, trials); }; });

  auto* b_table = binomial->add_subcommand("table", "Full PMF table over [0,n]^N");
  add_dist(b_table);
  b_table->add_option("--trials", trials, "Number of experiments n")->required();
  add_format(b_table);
  b_table->callback([&] { action = [&] { run_binomial_table(flags, trials); }; });

  auto* poisson = app.add_subcommand("poisson", "Multivariate Poisson law");
  poisson->require_subcommand(1);
  auto* p_pmf = poisson->add_subcommand("pmf", "Probability of one count vector");
  add_lambda(p_pmf);
  add_at(p_pmf);
  p_pmf->callback([&] { action = [&] { run_poisson_pmf(flags); }; });

  auto* p_table = poisson->add_subcommand("table", "PMF table over the box [0,box]^N");
  add_lambda(p_table);
  p_table->add_option("--box", box, "Per-event maximum count")->required();
  add_format(p_table);
  p_table->callback([&] { action = [&] { run_poisson_table(flags, box); }; });

  auto* p_conv = poisson->add_subcommand(
      "converge", "Sup deviation of the binomial law with p(X)=lambda(X)/n from the "
                  "Poisson law, per trial count");
  add_lambda(p_conv);
  p_conv->add_option("--trials", trials_list, "Comma-separated trial counts")->required();
  p_conv->add_option("--box", box, "Per-event maximum count of the sup box")->required();
  add_format(p_conv);
  p_conv->callback([&] { action = [&] { run_poisson_converge(flags, trials_list, box); }; });

  auto* sample = app.add_subcommand("sample", "Seeded random variate generation");
  sample->require_subcommand(1);
  auto* s_bern = sample->add_subcommand("bernoulli", "Multivariate Bernoulli testing scheme");
  add_dist(s_bern);
  s_bern->add_option("--trials", trials, "Trials per replication")->required();
  s_bern->add_option("--reps", reps, "Number of replications")->required();
  s_bern->add_option("--seed", seed, "PRNG seed")->required();
  add_format(s_bern);
  s_bern->callback([&] { action = [&] { run_sample_bernoulli(flags, trials, reps, seed); }; });

  auto* s_pois = sample->add_subcommand("poisson", "Per-terrace Poisson counts, folded");
  add_lambda(s_pois);
  s_pois->add_option("--reps", reps, "Number of replications")->required();
  s_pois->add_option("--seed", seed, "PRNG seed")->required();
  add_format(s_pois);
  s_pois->callback([&] { action = [&] { run_sample_poisson(flags, reps, seed); }; });

  auto* moments = app.add_subcommand("moments", "Mean vector and covariance matrices");
  moments->require_subcommand(1);
  auto* m_bin = moments->add_subcommand("binomial", "Binomial moments");
  add_dist(m_bin);
  m_bin->add_option("--trials", trials, "Number of experiments n")->required();
  add_format(m_bin);
  m_bin->callback([&] { action = [&] { run_moments_binomial(flags, trials); }; });

  auto* m_pois = moments->add_subcommand("poisson", "Poisson moments");
  add_lambda(m_pois);
  add_format(m_pois);
  m_pois->callback([&] { action = [&] { run_moments_poisson(flags); }; });

  auto* lattice = app.add_subcommand("lattice", "Constrained lattice diagnostics");
  lattice->require_subcommand(1);
  auto* l_count = lattice->add_subcommand("count", "Number of terrace-count solutions");
  l_count->add_option("--events", events_list, "Comma-separated event labels")->required();
  l_count
      ->add_option("--target", target_list,
                   "Comma-separated marginal counts, one per event as listed")
      ->required();
  l_count->add_option("--cap", cap, "Optional total-count cap (binomial case)");
  l_count->callback([&] { action = [&] { run_lattice_count(events_list, target_list, cap); }; });

  try {
    app.parse(argc, argv);
    if (action) action();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\nRun with --help for usage.\n";
    return 1;
  } catch (const ed::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
