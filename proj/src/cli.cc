//
// Copyright 2026 The dpepi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpepi/cli.h"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <memory>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "dpepi/analytics.h"
#include "dpepi/config.h"
#include "dpepi/contact_matrix.h"
#include "dpepi/csv.h"
#include "dpepi/datagen.h"
#include "dpepi/dp.h"
#include "dpepi/epi_ingest.h"
#include "dpepi/error.h"
#include "dpepi/rt.h"
#include "dpepi/svg.h"
#include "dpepi/transactions.h"
#include "dpepi/validation.h"

namespace dpepi::cli {
namespace {

// Substream ids so that different analyses never share noise.
enum Stream : std::uint64_t {
  kStreamPrivatize = 101,
  kStreamHotspot,
  kStreamMobility,
  kStreamAdherence,
  kStreamContact,
};

// Flag values shared across subcommands. Unset flags fall back to the
// config file.
struct Flags {
  std::string config;
  std::string out;
  std::string audit;
  std::string svg;
  std::string txns;
  std::string epi;
  std::string report;
  std::string city;
  std::string start;
  std::string end;
  std::string category;
  std::string super_category = "retail_and_recreation";
  std::string consumption;
  std::string counts;
  std::string counts_out;
  std::string target;
  std::string init;
  std::string log;
  std::string incidence;
  std::string column = "incidence";
  std::string country;
  std::string series = "cases";
  std::string covariates;
  std::string fitted;
  std::string reference;
  std::string region;
  std::string mode;
  std::string unit;
  double epsilon = 0;
  double total_epsilon = 0;
  double delta = 0;
  std::uint64_t seed = 0;
  int merchants = 0;
  int max_lag = 0;
  int window = 0;
  bool per_postal = false;
};

// Options registered by name so their presence can be queried.
class Parsed {
 public:
  void Add(const std::string& name, CLI::Option* opt) { opts_[name].push_back(opt); }
  bool Has(const std::string& name) const {
    auto it = opts_.find(name);
    if (it == opts_.end()) return false;
    for (const CLI::Option* o : it->second) {
      if (o->count() > 0) return true;
    }
    return false;
  }

 private:
  std::map<std::string, std::vector<CLI::Option*>> opts_;
};

struct Context {
  Flags& f;
  const Parsed& parsed;
  Config cfg;
  std::ostream& out;
};

Config LoadConfig(const Flags& f, const Parsed& parsed) {
  std::string path = f.config;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnvVar)) path = env;
  }
  Config cfg = path.empty() ? Config{} : Config::Load(path);
  if (parsed.Has("seed")) cfg.generation.seed = f.seed;
  if (parsed.Has("merchants")) cfg.generation.merchant_count = f.merchants;
  if (parsed.Has("epsilon")) cfg.privacy.epsilon = f.epsilon;
  if (parsed.Has("total-epsilon")) cfg.privacy.total_epsilon = f.total_epsilon;
  if (parsed.Has("delta")) cfg.analysis.delta = f.delta;
  if (parsed.Has("mode")) cfg.analysis.mode = dp::ParseNoiseMode(f.mode);
  if (parsed.Has("city")) {
    auto city = ParseCity(f.city);
    if (!city) throw ParameterError("unknown city '" + f.city + "'");
    cfg.window.city = *city;
  }
  if (parsed.Has("start")) cfg.window.start = Date::Parse(f.start);
  if (parsed.Has("end")) cfg.window.end = Date::Parse(f.end);
  if (parsed.Has("max-lag")) cfg.validation.ccf_max_lag = f.max_lag;
  if (parsed.Has("epi")) cfg.epi_csv = f.epi;
  return cfg;
}

std::vector<std::string> Countries(const Config& cfg) {
  std::vector<std::string> out;
  for (const auto& c : cfg.generation.cities) {
    std::string country(CountryOf(c.city));
    if (std::find(out.begin(), out.end(), country) == out.end()) {
      out.push_back(country);
    }
  }
  return out;
}

epi::WeeklyByCountry LoadEpi(const Config& cfg) {
  if (cfg.epi_csv.empty()) {
    throw ParameterError("no epidemiological CSV: pass --epi or set generation.epi_csv");
  }
  const auto countries = Countries(cfg);
  return epi::LoadWeekly(csv::ReadFile(cfg.epi_csv), countries,
                         cfg.generation.start, cfg.generation.end);
}

TransactionTable LoadTable(const Flags& f) {
  return ParseTransactionsCsv(csv::ReadFile(f.txns));
}

Rng AnalysisRng(const Config& cfg, Stream stream) {
  return SubstreamRng(cfg.generation.seed, stream);
}

std::string AuditPath(const Flags& f) {
  return f.audit.empty() ? f.out + ".audit.csv" : f.audit;
}

void WriteAudit(const Context& c, const dp::BudgetLedger& ledger,
                const std::vector<dp::ReleaseMetadata>& releases) {
  csv::WriteFile(AuditPath(c.f), dp::FormatAudit(ledger, releases));
}

std::vector<double> ToDoubles(const std::vector<long long>& v) {
  return {v.begin(), v.end()};
}

int CmdGenerate(Context& c) {
  const auto epi = LoadEpi(c.cfg);
  const auto table = datagen::Generate(c.cfg.generation, epi);
  csv::WriteFile(c.f.out, FormatTransactionsCsv(table));
  c.out << fmt::format("wrote {} rows to {}\n", table.rows.size(), c.f.out);
  return kExitOk;
}

int CmdPrivatize(Context& c) {
  const auto table = LoadTable(c.f);
  auto params = datagen::DefaultBaselinePrivacy(c.cfg.generation.categories);
  if (c.cfg.privacy.baseline) {
    params.per_category.clear();
    params.fallback = *c.cfg.privacy.baseline;
  }
  Rng rng = AnalysisRng(c.cfg, kStreamPrivatize);
  const auto noisy = datagen::PrivatizeBaseline(table, params, rng);
  csv::WriteFile(c.f.out, FormatTransactionsCsv(noisy));
  std::string audit = "# baseline template: independent Gaussian noise per field\n";
  audit += "category,count_scale,spend_scale\n";
  for (const auto& name : table.categories) {
    const auto& s = params.For(name);
    std::string row;
    csv::AppendField(row, name);
    audit += fmt::format("{},{},{}\n", row, s.count_scale, s.spend_scale);
  }
  csv::WriteFile(AuditPath(c.f), audit);
  c.out << fmt::format("wrote {} rows to {}\n", noisy.rows.size(), c.f.out);
  return kExitOk;
}

int CmdHotspot(Context& c) {
  const auto table = LoadTable(c.f);
  dp::BudgetLedger ledger(c.cfg.privacy.total_epsilon);
  Rng rng = AnalysisRng(c.cfg, kStreamHotspot);
  const auto map = analytics::Hotspot(table, c.cfg.window, c.cfg.privacy.epsilon,
                                      rng, ledger, c.cfg.analysis);
  csv::WriteFile(c.f.out, analytics::FormatHotspotCsv(map));
  WriteAudit(c, ledger, {map.privacy});
  if (!c.f.svg.empty()) {
    csv::WriteFile(c.f.svg,
                   svg::Heatmap(map.counts, fmt::format("Hotspots: {}",
                                                        CityName(c.cfg.window.city))));
  }
  c.out << fmt::format("{} postal codes, sigma {:.6g}\n", map.counts.size(),
                       map.privacy.sigma);
  return kExitOk;
}

int CmdMobility(Context& c) {
  const auto table = LoadTable(c.f);
  const auto super = analytics::ParseSuperCategory(c.f.super_category);
  dp::BudgetLedger ledger(c.cfg.privacy.total_epsilon);
  Rng rng = AnalysisRng(c.cfg, kStreamMobility);
  const auto series =
      analytics::Mobility(table, c.cfg.window, super, c.cfg.privacy.epsilon, rng,
                          ledger, c.cfg.analysis, c.f.per_postal);
  csv::WriteFile(c.f.out, analytics::FormatMobilityCsv(series));
  WriteAudit(c, ledger, {series.privacy});
  if (!c.f.svg.empty()) {
    csv::WriteFile(c.f.svg,
                   svg::LineChart(series.dates,
                                  {{"pct change", series.pct_change_from_baseline}},
                                  fmt::format("Mobility: {} ({})",
                                              CityName(c.cfg.window.city),
                                              c.f.super_category)));
  }
  c.out << fmt::format("{} weeks, sigma {:.6g}\n", series.dates.size(),
                       series.privacy.sigma);
  if (!c.f.reference.empty()) {
    const std::string region =
        c.f.region.empty() ? std::string(CityName(c.cfg.window.city)) : c.f.region;
    epi::MobilityColumns cols;
    cols.categories = {c.f.super_category};
    const auto refs = epi::ParseMobilityCsv(csv::ReadFile(c.f.reference), region,
                                            c.cfg.generation.start,
                                            c.cfg.generation.end, cols);
    for (const auto& ref : refs) {
      const auto cmp = validation::CompareMobility(series, ref);
      c.out << fmt::format("reference {} / {}: r = {:.4f} over {} weeks\n",
                           ref.region, ref.category, cmp.r, cmp.overlap);
    }
  }
  return kExitOk;
}

int CmdAdherence(Context& c) {
  const auto table = LoadTable(c.f);
  dp::BudgetLedger ledger(c.cfg.privacy.total_epsilon);
  Rng rng = AnalysisRng(c.cfg, kStreamAdherence);
  const auto series = analytics::Adherence(table, c.cfg.window, c.cfg.privacy.epsilon,
                                           rng, ledger, c.cfg.analysis);
  csv::WriteFile(c.f.out, analytics::FormatAdherenceCsv(series));
  WriteAudit(c, ledger, {series.privacy});
  if (!c.f.svg.empty()) {
    csv::WriteFile(c.f.svg,
                   svg::LineChart(series.dates,
                                  {{"essential", ToDoubles(series.essential)},
                                   {"luxury", ToDoubles(series.luxury)}},
                                  fmt::format("Adherence: {}",
                                              CityName(c.cfg.window.city))));
  }
  c.out << fmt::format("{} weeks, sigma {:.6g}\n", series.dates.size(),
                       series.privacy.sigma);
  return kExitOk;
}

Eigen::VectorXd MixingFactors(const Config& cfg, int age_groups) {
  const auto& m = cfg.contact.mixing_factors;
  if (m.empty()) return Eigen::VectorXd::Ones(age_groups);
  if (static_cast<int>(m.size()) != age_groups) {
    throw DimensionError(fmt::format("{} mixing factors for {} age groups",
                                     m.size(), age_groups));
  }
  return Eigen::Map<const Eigen::VectorXd>(m.data(), age_groups);
}

int CmdContactMatrix(Context& c) {
  const auto table = LoadTable(c.f);
  std::vector<std::string> categories;
  for (const auto& p : c.cfg.generation.categories) categories.push_back(p.name);
  const int groups = c.cfg.contact.age_groups;
  const Eigen::MatrixXd d =
      c.f.consumption.empty()
          ? contact::UniformConsumption(groups, static_cast<int>(categories.size()))
          : contact::ParseMatrixCsv(csv::ReadFile(c.f.consumption));
  std::vector<City> cities;
  contact::EstimateOptions options;
  options.weighting = c.cfg.contact.weighting;
  options.settings = c.cfg.analysis;
  for (const auto& cp : c.cfg.generation.cities) {
    cities.push_back(cp.city);
    options.populations.push_back(cp.population);
  }
  dp::BudgetLedger ledger(c.cfg.privacy.total_epsilon);
  Rng rng = AnalysisRng(c.cfg, kStreamContact);
  // The analysis epsilon covers the whole release; each city gets a share.
  const double per_city = c.cfg.privacy.epsilon / static_cast<double>(cities.size());
  const auto est = contact::EstimateContactMatrix(
      table, d, MixingFactors(c.cfg, static_cast<int>(d.rows())), cities,
      categories, per_city, rng, ledger, options);
  csv::WriteFile(c.f.out, contact::FormatMatrixCsv(est.contact));
  if (!c.f.counts_out.empty()) {
    Eigen::MatrixXd counts(static_cast<Eigen::Index>(est.category_counts.size()),
                           static_cast<Eigen::Index>(categories.size()));
    for (std::size_t i = 0; i < est.category_counts.size(); ++i) {
      counts.row(static_cast<Eigen::Index>(i)) = est.category_counts[i].transpose();
    }
    csv::WriteFile(c.f.counts_out, contact::FormatMatrixCsv(counts));
  }
  WriteAudit(c, ledger, {est.privacy});
  c.out << fmt::format("{}x{} contact matrix, sigma {:.6g}\n", est.contact.rows(),
                       est.contact.cols(), est.privacy.sigma);
  return kExitOk;
}

int CmdTrainD(Context& c) {
  const Eigen::MatrixXd counts = contact::ParseMatrixCsv(csv::ReadFile(c.f.counts));
  const Eigen::MatrixXd target = contact::ParseMatrixCsv(csv::ReadFile(c.f.target));
  std::vector<Eigen::VectorXd> city_counts;
  for (Eigen::Index i = 0; i < counts.rows(); ++i) {
    city_counts.push_back(counts.row(i).transpose());
  }
  const auto& hyper = c.cfg.contact.training;
  Eigen::MatrixXd init;
  if (!c.f.init.empty()) {
    init = contact::ParseMatrixCsv(csv::ReadFile(c.f.init));
  } else {
    Rng rng(hyper.seed);
    init = contact::RandomConsumption(static_cast<int>(target.rows()),
                                      static_cast<int>(counts.cols()), rng);
  }
  const auto result = contact::TrainConsumption(
      city_counts, target, init, MixingFactors(c.cfg, static_cast<int>(target.rows())),
      hyper);
  csv::WriteFile(c.f.out, contact::FormatMatrixCsv(result.consumption));
  if (!c.f.log.empty()) csv::WriteFile(c.f.log, contact::FormatTrainingLog(result));
  c.out << fmt::format("final loss {:.6g} after {} iterations ({})\n",
                       result.final_loss, result.iterations,
                       result.converged ? "converged" : "not converged");
  return kExitOk;
}

// Incidence (and optional covariates) from a CSV file or an OWID series.
struct IncidenceInput {
  std::vector<double> incidence;
  std::vector<std::string> dates;  // empty when the input has none
  csv::Table table;
};

rt::TimeUnit ParseUnit(const std::string& s) {
  if (s == "day") return rt::TimeUnit::kDay;
  if (s == "week") return rt::TimeUnit::kWeek;
  throw ParameterError("unknown time unit '" + s + "'");
}

std::vector<double> NumericColumn(const csv::Table& t, std::string_view name) {
  const std::size_t col = t.RequireColumn(name);
  std::vector<double> out;
  for (std::size_t i = 0; i < t.rows().size(); ++i) {
    const std::string& s = t.rows()[i].at(col);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || !std::isfinite(v)) {
      throw RowError(t.line_of(i), fmt::format("bad value '{}' in column {}", s, name));
    }
    out.push_back(v);
  }
  return out;
}

IncidenceInput ReadIncidence(Context& c) {
  IncidenceInput in;
  if (!c.f.country.empty()) {
    const std::string country = c.f.country;
    if (c.cfg.epi_csv.empty()) throw ParameterError("--country needs --epi");
    const auto weekly = epi::LoadWeekly(csv::ReadFile(c.cfg.epi_csv),
                                        std::vector<std::string>{country},
                                        c.cfg.generation.start, c.cfg.generation.end);
    const auto& s = weekly.at(country);
    if (c.f.series == "cases") {
      in.incidence = s.new_cases;
    } else if (c.f.series == "deaths") {
      in.incidence = s.new_deaths;
    } else {
      throw ParameterError("--series must be cases or deaths");
    }
    for (Date d : s.week_end_dates) in.dates.push_back(d.ToString());
    return in;
  }
  in.table = csv::Table::Parse(csv::ReadFile(c.f.incidence));
  in.incidence = NumericColumn(in.table, c.f.column);
  if (auto col = in.table.FindColumn("date")) {
    for (const auto& row : in.table.rows()) in.dates.push_back(row.at(*col));
  }
  return in;
}

rt::SerialInterval SerialIntervalFor(Context& c) {
  RtSection r = c.cfg.rt;
  // OWID input is weekly; use weekly defaults unless the config is weekly.
  if (!c.f.country.empty() && r.unit != rt::TimeUnit::kWeek) {
    r.unit = rt::TimeUnit::kWeek;
    r.window = 2;
    r.si_max = 5;
  }
  if (c.parsed.Has("unit")) r.unit = ParseUnit(c.f.unit);
  if (c.parsed.Has("window")) r.window = c.f.window;
  c.cfg.rt = r;
  return rt::DiscretizeSerialInterval(r.si_mean, r.si_sd, r.si_max, r.unit);
}

int CmdRt(Context& c) {
  const auto in = ReadIncidence(c);
  const auto si = SerialIntervalFor(c);
  const auto& r = c.cfg.rt;
  const auto est =
      rt::EstimateRt(in.incidence, si.weights, r.window, r.prior_shape, r.prior_rate);
  std::string text = in.dates.empty() ? "t" : "date";
  text += ",incidence,mean,lower,upper,prior_only\n";
  for (std::size_t t = 0; t < in.incidence.size(); ++t) {
    text += fmt::format("{},{},{:.6f},{:.6f},{:.6f},{}\n",
                        in.dates.empty() ? std::to_string(t) : in.dates[t],
                        in.incidence[t], est.mean[t], est.lower[t], est.upper[t],
                        est.prior_only[t] ? 1 : 0);
  }
  csv::WriteFile(c.f.out, text);
  if (!c.f.svg.empty()) {
    std::vector<Date> dates;
    for (const auto& d : in.dates) dates.push_back(Date::Parse(d));
    if (dates.empty()) {
      for (std::size_t t = 0; t < in.incidence.size(); ++t) {
        dates.push_back(kGridStart + static_cast<int>(t));
      }
    }
    csv::WriteFile(c.f.svg, svg::LineChart(dates,
                                           {{"R_t mean", est.mean},
                                            {"2.5%", est.lower},
                                            {"97.5%", est.upper}},
                                           "R_t"));
  }
  c.out << fmt::format("estimated R_t over {} steps\n", in.incidence.size());
  return kExitOk;
}

std::vector<std::string> SplitComma(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const std::string item =
        s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int CmdFitCovariates(Context& c) {
  if (!c.f.country.empty()) {
    throw ParameterError("fit-covariates reads --incidence with covariate columns");
  }
  const auto in = ReadIncidence(c);
  const auto si = SerialIntervalFor(c);
  const auto labels = SplitComma(c.f.covariates);
  if (labels.empty()) throw ParameterError("--covariates needs at least one column");
  std::vector<std::vector<double>> covariates;
  for (const auto& l : labels) covariates.push_back(NumericColumn(in.table, l));
  const auto design = rt::BuildDesign(covariates, labels, in.incidence.size());
  const auto lambda = rt::Infectiousness(in.incidence, si.weights);
  const auto fit = rt::FitCovariates(in.incidence, lambda, design);
  std::string text = "term,beta\n";
  for (std::size_t i = 0; i < fit.beta.size(); ++i) {
    std::string row;
    csv::AppendField(row, fit.labels[i]);
    text += fmt::format("{},{:.10g}\n", row, fit.beta[i]);
  }
  csv::WriteFile(c.f.out, text);
  if (!c.f.fitted.empty()) {
    std::string fitted = "t,fitted_rt\n";
    for (std::size_t t = 0; t < fit.fitted_rt.size(); ++t) {
      fitted += fmt::format("{},{:.6f}\n", t, fit.fitted_rt[t]);
    }
    csv::WriteFile(c.f.fitted, fitted);
  }
  c.out << fmt::format("log-likelihood {:.6f} after {} Newton iterations\n",
                       fit.log_likelihood, fit.iterations);
  return kExitOk;
}

int CmdCcf(Context& c) {
  const auto table = LoadTable(c.f);
  const auto weekly = LoadEpi(c.cfg);
  const City city = c.cfg.window.city;
  const auto cat = table.CategoryIndex(c.f.category);
  if (!cat) throw NotFoundError("category not in table: " + c.f.category);
  const auto& series = weekly.at(std::string(CountryOf(city)));
  std::vector<Date> dates;
  for (const auto& r : table.rows) dates.push_back(r.date);
  std::sort(dates.begin(), dates.end());
  dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
  std::vector<double> deaths(dates.size(), 0.0);
  for (std::size_t k = 0; k < dates.size(); ++k) {
    if (auto idx = series.IndexOf(dates[k])) deaths[k] = series.new_deaths[*idx];
  }
  const auto volume = validation::WeeklyVolume(table, city, *cat, dates);
  const auto ccf = validation::Ccf(deaths, volume, c.cfg.validation.ccf_max_lag);
  std::string text = "lag,r\n";
  for (std::size_t l = 0; l < ccf.r.size(); ++l) {
    text += fmt::format("{},{:.6f}\n", l, ccf.r[l]);
  }
  csv::WriteFile(c.f.out, text);
  c.out << fmt::format("lag_max {} ccf_max {:.4f}\n", ccf.lag_max, ccf.ccf_max);
  return kExitOk;
}

int CmdValidate(Context& c) {
  const auto table = LoadTable(c.f);
  const auto weekly = LoadEpi(c.cfg);
  const auto report =
      validation::ValidateDataset(table, weekly, c.cfg.generation, c.cfg.validation);
  const std::string path = c.f.report.empty() ? "validation_report.csv" : c.f.report;
  csv::WriteFile(path, report.ToCsv());
  c.out << report.ToText();
  if (!report.AllPassed()) {
    c.out << "validation failed; report written to " << path << "\n";
    return kExitValidationFailed;
  }
  c.out << "report written to " << path << "\n";
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Flags f;
  Parsed parsed;
  CLI::App app{"Differentially private epidemiology on synthetic transactions",
               "dpepi"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  auto common = [&](CLI::App* sub) {
    parsed.Add("config", sub->add_option("--config", f.config,
                                         "JSON config (default: $DPEPI_CONFIG)"));
    parsed.Add("seed", sub->add_option("--seed", f.seed, "Override the seed"));
  };
  auto privacy = [&](CLI::App* sub) {
    parsed.Add("epsilon", sub->add_option("--epsilon", f.epsilon, "Analysis epsilon"));
    parsed.Add("total-epsilon",
               sub->add_option("--total-epsilon", f.total_epsilon, "Ledger budget"));
    parsed.Add("delta", sub->add_option("--delta", f.delta, "Delta (analytic mode)"));
    parsed.Add("mode", sub->add_option("--mode", f.mode,
                                       "paper-linear or analytic-gaussian"));
    sub->add_option("--audit", f.audit, "Audit sidecar (default: <out>.audit.csv)");
  };
  auto window = [&](CLI::App* sub) {
    parsed.Add("city", sub->add_option("--city", f.city, "City"));
    parsed.Add("start", sub->add_option("--start", f.start, "Window start YYYY-MM-DD"));
    parsed.Add("end", sub->add_option("--end", f.end, "Window end YYYY-MM-DD"));
  };
  auto txns = [&](CLI::App* sub) {
    sub->add_option("--txns", f.txns, "Transactions CSV")->required();
  };
  auto epi = [&](CLI::App* sub) {
    parsed.Add("epi", sub->add_option("--epi", f.epi, "OWID-style epidemiological CSV"));
  };
  auto output = [&](CLI::App* sub) {
    sub->add_option("--out", f.out, "Output CSV")->required();
  };

  std::map<CLI::App*, std::function<int(Context&)>> handlers;

  auto* gen = app.add_subcommand("generate", "Generate the synthetic transaction table");
  common(gen);
  epi(gen);
  output(gen);
  parsed.Add("merchants", gen->add_option("--merchants", f.merchants, "Merchant count"));
  handlers[gen] = CmdGenerate;

  auto* priv = app.add_subcommand("privatize", "Baseline per-row noise template");
  common(priv);
  txns(priv);
  output(priv);
  priv->add_option("--audit", f.audit, "Audit sidecar (default: <out>.audit.csv)");
  handlers[priv] = CmdPrivatize;

  auto* hot = app.add_subcommand("hotspot", "DP offline volume per postal code");
  common(hot);
  privacy(hot);
  window(hot);
  txns(hot);
  output(hot);
  hot->add_option("--svg", f.svg, "Optional SVG heatmap");
  handlers[hot] = CmdHotspot;

  auto* mob = app.add_subcommand("mobility", "DP weekly super-category volume");
  common(mob);
  privacy(mob);
  window(mob);
  txns(mob);
  output(mob);
  epi(mob);
  mob->add_option("--super-category", f.super_category,
                  "retail_and_recreation, grocery_and_pharmacy or transit_stations");
  mob->add_flag("--per-postal", f.per_postal, "Release per postal code and sum");
  mob->add_option("--reference", f.reference, "Mobility report CSV to compare with");
  mob->add_option("--region", f.region, "Region in the reference CSV");
  mob->add_option("--svg", f.svg, "Optional SVG line chart");
  handlers[mob] = CmdMobility;

  auto* adh = app.add_subcommand("adherence", "DP essential vs luxury volume");
  common(adh);
  privacy(adh);
  window(adh);
  txns(adh);
  output(adh);
  adh->add_option("--svg", f.svg, "Optional SVG line chart");
  handlers[adh] = CmdAdherence;

  auto* cm = app.add_subcommand("contact-matrix", "DP national contact matrix");
  common(cm);
  privacy(cm);
  txns(cm);
  output(cm);
  cm->add_option("--consumption", f.consumption, "Consumption matrix D (default uniform)");
  cm->add_option("--counts-out", f.counts_out, "Write released city x category counts");
  handlers[cm] = CmdContactMatrix;

  auto* train = app.add_subcommand("train-d", "Fit D to a target contact matrix");
  common(train);
  output(train);
  train->add_option("--counts", f.counts, "City x category counts")->required();
  train->add_option("--target", f.target, "Target contact matrix")->required();
  train->add_option("--init", f.init, "Initial D (default random)");
  train->add_option("--log", f.log, "Training log CSV");
  handlers[train] = CmdTrainD;

  auto rt_inputs = [&](CLI::App* sub) {
    sub->add_option("--incidence", f.incidence, "CSV with an incidence column");
    sub->add_option("--column", f.column, "Incidence column name");
    parsed.Add("unit", sub->add_option("--unit", f.unit, "day or week"));
    parsed.Add("window", sub->add_option("--window", f.window, "Estimation window"));
  };
  auto* rtc = app.add_subcommand("rt", "Renewal-equation R_t estimation");
  common(rtc);
  output(rtc);
  rt_inputs(rtc);
  epi(rtc);
  rtc->add_option("--country", f.country, "Use this OWID country (weekly)");
  rtc->add_option("--series", f.series, "cases or deaths");
  rtc->add_option("--svg", f.svg, "Optional SVG line chart");
  handlers[rtc] = CmdRt;

  auto* fit = app.add_subcommand("fit-covariates", "Poisson regression of R_t on covariates");
  common(fit);
  output(fit);
  rt_inputs(fit);
  fit->add_option("--covariates", f.covariates, "Comma-separated covariate columns")
      ->required();
  fit->add_option("--fitted", f.fitted, "Write fitted R_t");
  handlers[fit] = CmdFitCovariates;

  auto* ccf = app.add_subcommand("ccf", "Cross-correlation of deaths and category volume");
  common(ccf);
  txns(ccf);
  epi(ccf);
  output(ccf);
  window(ccf);
  ccf->add_option("--category", f.category, "Merchant category")->required();
  parsed.Add("max-lag", ccf->add_option("--max-lag", f.max_lag, "Largest lag"));
  handlers[ccf] = CmdCcf;

  auto* val = app.add_subcommand("validate", "Conformance checks on a table");
  common(val);
  txns(val);
  epi(val);
  val->add_option("--report", f.report, "Report CSV (default validation_report.csv)");
  parsed.Add("max-lag", val->add_option("--max-lag", f.max_lag, "Largest CCF lag"));
  handlers[val] = CmdValidate;

  if (!args.empty() && !args.front().empty() && args.front()[0] != '-') {
    bool known = false;
    for (const auto& [sub, handler] : handlers) known |= sub->get_name() == args.front();
    if (!known) {
      err << "error: unknown subcommand '" << args.front() << "'\n\n" << app.help();
      return kExitUsage;
    }
  }

  std::vector<const char*> argv{"dpepi"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  for (auto& [sub, handler] : handlers) {
    if (!sub->parsed()) continue;
    if (rtc->parsed() || fit->parsed()) {
      if (f.incidence.empty() && f.country.empty()) {
        err << "error: --incidence or --country is required\n";
        return kExitUsage;
      }
    }
    try {
      Context ctx{f, parsed, LoadConfig(f, parsed), out};
      return handler(ctx);
    } catch (const BudgetExceededError& e) {
      err << "budget exceeded: " << e.what() << "\n";
      return kExitBudgetExceeded;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kExitError;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitError;
    }
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace dpepi::cli
