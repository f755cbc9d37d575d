// Copyright 2026 The stcorpus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stcorpus/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "stcorpus/error.hpp"
#include "stcorpus/temporal.hpp"

namespace stcorpus {
namespace {

namespace fs = std::filesystem;
using namespace std::chrono;

struct RegionSpec {
  const char* fine;
  const char* nuts;   // supra column as written in regions.tsv
  const char* group;  // planted spatial group; nullptr = never generated
  int weight;         // share inside its supra region
  std::vector<const char*> aliases;
};

const std::vector<RegionSpec>& region_specs() {
  static const std::vector<RegionSpec> specs = {
      {"Piemonte", "North-West", "Epicentre", 5,
       {"Piedmont", "Torino", "Turin", "Novara", "Asti", "Cuneo", "Alessandria"}},
      {"Valle d'Aosta", "North-West", nullptr, 0, {"Aosta", "Aosta Valley", "Vallée d'Aoste"}},
      {"Liguria", "North-West", "Epicentre", 3,
       {"Genova", "Genoa", "La Spezia", "Savona", "Sanremo", "Imperia"}},
      {"Lombardia", "North-West", "Epicentre", 10,
       {"Lombardy", "Milano", "Milan", "Bergamo", "Brescia", "Cremona", "Lodi", "Codogno", "Monza",
        "Como", "Varese", "Pavia"}},
      {"Trentino-Alto Adige", "North-East", "Periphery", 2,
       {"Trentino", "Alto Adige", "Südtirol", "Trento", "Bolzano", "Bozen"}},
      {"Veneto", "North-East", "Epicentre", 5,
       {"Venezia", "Venice", "Verona", "Padova", "Padua", "Vicenza", "Treviso"}},
      {"Friuli-Venezia Giulia", "North-East", "Periphery", 2,
       {"Friuli", "FVG", "Trieste", "Udine", "Pordenone", "Gorizia"}},
      {"Emilia-Romagna", "North-East", "Epicentre", 5,
       {"Emilia Romagna", "Bologna", "Modena", "Parma", "Piacenza", "Rimini", "Ferrara", "Ravenna",
        "Reggio Emilia", "Forlì"}},
      {"North", "North", nullptr, 0, {"Nord Italia", "Northern Italy", "Nord"}},
      {"Toscana", "Centre", "Epicentre", 4,
       {"Tuscany", "Firenze", "Florence", "Pisa", "Siena", "Livorno", "Lucca", "Arezzo", "Prato"}},
      {"Umbria", "Centre", "Periphery", 1, {"Perugia", "Terni", "Assisi"}},
      {"Marche", "Centre", "Periphery", 2, {"Ancona", "Pesaro", "Macerata", "Fermo"}},
      {"Lazio", "Centre", "Epicentre", 6,
       {"Roma", "Rome", "Latina", "Viterbo", "Frosinone", "Civitavecchia"}},
      {"Centre", "Centre", nullptr, 0, {"Centro Italia", "Central Italy"}},
      {"Abruzzo", "South", "Periphery", 2, {"L'Aquila", "Pescara", "Chieti", "Teramo"}},
      {"Molise", "South", "Periphery", 1, {"Campobasso", "Isernia"}},
      {"Campania", "South", "Periphery", 5,
       {"Napoli", "Naples", "Salerno", "Caserta", "Avellino", "Benevento", "Battipaglia",
        "Irpinia"}},
      {"Puglia", "South", "Periphery", 4, {"Apulia", "Bari", "Taranto", "Lecce", "Foggia", "Brindisi"}},
      {"Basilicata", "South", "Periphery", 1, {"Potenza", "Matera"}},
      {"Calabria", "South", "Periphery", 2, {"Catanzaro", "Reggio Calabria", "Cosenza", "Crotone"}},
      {"South", "South", "Periphery", 2, {"Sud Italia", "Southern Italy", "Meridione", "Sud"}},
      {"Sicilia", "Islands", "Periphery", 3,
       {"Sicily", "Palermo", "Catania", "Messina", "Siracusa", "Syracuse", "Trapani", "Agrigento"}},
      {"Sardegna", "Islands", "Periphery", 2, {"Sardinia", "Cagliari", "Sassari", "Olbia", "Nuoro"}},
      {"Italy", "Italy", "Epicentre", 1, {"Italia", "Italy", "Bel Paese"}},
  };
  return specs;
}

constexpr std::array<std::pair<const char*, int>, 5> kSupraShares = {
    {{"North", 36}, {"Italy", 24}, {"Centre", 24}, {"South", 10}, {"Islands", 6}}};

// Strings that no gazetteer entry resolves ("Roma, Milano" is contradictory).
constexpr std::array<const char*, 10> kUnmappedLocations = {
    "", "Worldwide", "London, UK", "Paris", "Mars", "ovunque", "Roma, Milano", "Europe",
    "New York", "sul divano"};

constexpr std::array<const char*, 96> kCommonWords = {
    "il", "la", "di", "che", "e", "un", "una", "per", "non", "con", "si", "da", "del", "della",
    "in", "sono", "ma", "come", "anche", "questo", "tutti", "oggi", "domani", "ieri", "ora",
    "casa", "governo", "ospedale", "scuola", "lavoro", "famiglia", "amici", "notizie", "dati",
    "medici", "persone", "città", "paese", "giorno", "settimana", "mese", "tempo", "vita",
    "salute", "paura", "speranza", "dopo", "prima", "sempre", "mai", "molto", "poco", "tanto",
    "grazie", "bene", "male", "nuovo", "nuova", "primo", "ultimo", "grande", "piccolo", "più",
    "meno", "fare", "dire", "vedere", "sapere", "andare", "stare", "restare", "uscire", "aprire",
    "chiudere", "numero", "caso", "misure", "regione", "sindaco", "presidente", "strada",
    "negozi", "mascherine", "test", "vaccino", "sintomi", "tamponi", "economia", "crisi",
    "aiuto", "insieme", "forza", "silenzio", "finestra", "balcone", "musica"};

// Filler vocabulary: the common words first, then pronounceable inventions,
// sampled with Zipf weights.
std::vector<std::string> filler_vocabulary() {
  std::vector<std::string> words(kCommonWords.begin(), kCommonWords.end());
  static constexpr std::string_view consonants = "bcdfglmnprstv";
  static constexpr std::string_view vowels = "aeiou";
  std::vector<std::string> syllables;
  for (char c : consonants)
    for (char v : vowels) syllables.push_back(std::string{c, v});
  for (std::size_t i = 0; words.size() < 400; ++i) {
    // (7i mod 65, i / 65) never repeats, so every word is new.
    const auto& a = syllables[(i * 7) % syllables.size()];
    const auto& b = syllables[(i / syllables.size() + 3) % syllables.size()];
    const auto& c = syllables[(i * 29 + 11) % syllables.size()];
    std::string w = a + b + c;
    if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(std::move(w));
  }
  return words;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  std::size_t index(std::size_t n) {
    return std::min(static_cast<std::size_t>(uniform() * static_cast<double>(n)), n - 1);
  }
  bool chance(double p) { return uniform() < p; }
  std::size_t pick(const std::vector<double>& cumulative) {
    const double x = uniform() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    return std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
  }

 private:
  std::mt19937_64 gen_;
};

std::vector<double> cumulate(const std::vector<double>& w) {
  std::vector<double> c(w.size());
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) c[i] = s += w[i];
  return c;
}

// Largest-remainder split of `total` by integer weights.
std::vector<std::size_t> apportion(std::size_t total, const std::vector<int>& weights) {
  long long sum = 0;
  for (int w : weights) sum += w;
  std::vector<std::size_t> out(weights.size());
  std::vector<std::pair<long long, std::size_t>> rest;
  std::size_t given = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const long long num = static_cast<long long>(total) * weights[i];
    out[i] = static_cast<std::size_t>(num / sum);
    given += out[i];
    rest.push_back({num % sum, i});
  }
  std::stable_sort(rest.begin(), rest.end(), [](auto& a, auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; given < total; ++i, ++given) ++out[rest[i].second];
  return out;
}

double bump(double d, double centre, double width) {
  const double z = (d - centre) / width;
  return std::exp(-0.5 * z * z);
}

// Day weights: the epicentre peaks around the first outbreak news, the
// periphery with the national lockdown.
double day_weight(const std::string& group, std::size_t d) {
  const double x = static_cast<double>(d);
  if (group == "Epicentre") return 0.3 + 10.0 * bump(x, 26, 4) + 3.0 * bump(x, 45, 10);
  return 0.3 + 1.5 * bump(x, 28, 4) + 8.0 * bump(x, 55, 10);
}

std::string lower_ascii(std::string s) {
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

std::string upper_ascii(std::string s) {
  for (char& c : s)
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  return s;
}

std::string location_string(const RegionSpec& spec, Rng& rng) {
  const std::size_t n = spec.aliases.size() + 1;
  const std::size_t pick = rng.index(n);
  std::string form = pick == 0 ? spec.fine : spec.aliases[pick - 1];
  const bool pseudo = std::string_view(spec.fine) == spec.nuts;
  switch (rng.index(pseudo ? 3 : 5)) {
    case 0: return form;
    case 1: return lower_ascii(form);
    case 2: return upper_ascii(form) + " \xF0\x9F\x87\xAE\xF0\x9F\x87\xB9";
    case 3: return form + ", Italia";
    default: return form + ", Italy";
  }
}

}  // namespace

std::string default_regions_tsv() {
  std::string out = "# fine_region\tsupra_region\n";
  for (const auto& r : region_specs()) out += std::string(r.fine) + '\t' + r.nuts + '\n';
  return out;
}

std::string default_gazetteer_tsv() {
  std::string out = "# raw_location\tfine_region\n";
  for (const auto& r : region_specs())
    for (const char* a : r.aliases) out += std::string(a) + '\t' + r.fine + '\n';
  return out;
}

SynthCorpus generate_corpus(const SynthOptions& opt) {
  if (opt.records == 0) throw Error(ErrorCode::Config, "synthetic corpus needs records");
  Rng rng(opt.seed);
  SynthCorpus corpus;
  const PeriodConfig periods = PeriodConfig::defaults();
  const Day first = periods.start();
  const auto n_days = static_cast<std::size_t>((periods.end() - first).count());

  const std::size_t unmapped =
      static_cast<std::size_t>(std::llround(static_cast<double>(opt.records) * opt.unmapped_fraction));
  const std::size_t mapped = opt.records - unmapped;

  // Per-record region (index into region_specs, or npos for unmapped).
  const auto& specs = region_specs();
  std::vector<std::size_t> region_of;
  region_of.reserve(opt.records);
  std::vector<int> supra_weights;
  for (const auto& s : kSupraShares) supra_weights.push_back(s.second);
  const auto supra_n = apportion(mapped, supra_weights);
  for (std::size_t s = 0; s < kSupraShares.size(); ++s) {
    corpus.supra_counts[kSupraShares[s].first] = supra_n[s];
    std::vector<std::size_t> members;
    std::vector<int> weights;
    for (std::size_t r = 0; r < specs.size(); ++r) {
      const auto supra = std::string_view(specs[r].nuts).substr(0, 5) == "North" ? "North" : specs[r].nuts;
      if (specs[r].weight > 0 && std::string_view(supra) == kSupraShares[s].first) {
        members.push_back(r);
        weights.push_back(specs[r].weight);
      }
    }
    const auto split = apportion(supra_n[s], weights);
    for (std::size_t m = 0; m < members.size(); ++m) region_of.insert(region_of.end(), split[m], members[m]);
  }
  region_of.insert(region_of.end(), unmapped, static_cast<std::size_t>(-1));
  corpus.unmapped = unmapped;
  rng.shuffle(region_of);

  std::map<std::string, std::vector<double>> day_cdf;
  for (const char* g : {"Epicentre", "Periphery"}) {
    std::vector<double> w(n_days);
    for (std::size_t d = 0; d < n_days; ++d) w[d] = day_weight(g, d);
    day_cdf[g] = cumulate(w);
  }
  for (const auto& r : specs)
    if (r.group) corpus.region_group[r.fine] = r.group;

  for (const auto& p : periods.periods())
    for (const char* g : {"Epicentre", "Periphery"})
      corpus.planted.push_back({"kw" + lower_ascii(p.name) + (g[0] == 'E' ? "epi" : "per"), p.name, g});
  auto planted_for = [&](const std::string& period, const std::string& group) -> const std::string& {
    for (const auto& p : corpus.planted)
      if (p.period == period && p.spatial == group) return p.term;
    throw Error(ErrorCode::OutOfRange, "no planted term for " + period + "|" + group);
  };

  const auto words = filler_vocabulary();
  std::vector<double> zipf(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) zipf[i] = 1.0 / static_cast<double>(i + 1);
  const auto word_cdf = cumulate(zipf);

  auto body = [&](const std::string* planted) {
    std::vector<std::string> w;
    const std::size_t n = 6 + rng.index(9);
    for (std::size_t i = 0; i < n; ++i) w.push_back(words[rng.pick(word_cdf)]);
    if (rng.chance(0.10)) {
      const std::size_t at = rng.index(w.size() + 1);
      w.insert(w.begin() + static_cast<std::ptrdiff_t>(at), {"zona", "rossa"});
    }
    if (rng.chance(0.25))
      w.insert(w.begin() + static_cast<std::ptrdiff_t>(rng.index(w.size() + 1)),
               "@utente" + std::to_string(rng.index(500)));
    if (rng.chance(0.15)) w.push_back(rng.chance(0.5) ? "#Covid-19" : "#coronavirus");
    if (planted)
      w.insert(w.begin() + static_cast<std::ptrdiff_t>(rng.index(w.size() + 1)), *planted);
    if (rng.chance(0.20)) w.push_back("https://t.co/" + std::to_string(100000 + rng.index(900000)));
    std::string text;
    if (rng.chance(0.03)) text = "AGGIORNAMENTO AUTOMATICO: ";
    for (std::size_t i = 0; i < w.size(); ++i) text += (i ? " " : "") + w[i];
    if (rng.chance(0.02)) text += " condividi questo post";
    return text;
  };

  auto make = [&](std::size_t i, std::size_t region, const char* id_prefix) {
    TweetRecord r;
    char id[32];
    std::snprintf(id, sizeof id, "%s%012zu", id_prefix, i);
    r.id = id;
    const std::string group =
        region == static_cast<std::size_t>(-1) ? (rng.chance(0.5) ? "Epicentre" : "Periphery")
                                               : specs[region].group;
    const std::size_t d = rng.pick(day_cdf[group]);
    r.created_at = Instant{first + days{static_cast<int>(d)}} + seconds{rng.index(86400)};
    r.user_location = region == static_cast<std::size_t>(-1)
                          ? kUnmappedLocations[rng.index(kUnmappedLocations.size())]
                          : location_string(specs[region], rng);
    r.language = "it";
    r.tweet_type = rng.chance(opt.retweet_fraction) ? TweetType::Retweet : TweetType::Original;
    const std::string* planted = nullptr;
    if (r.tweet_type == TweetType::Original && region != static_cast<std::size_t>(-1) &&
        rng.chance(opt.plant_rate))
      planted = &planted_for(assign_period(r.created_at, periods), group);
    r.text = body(planted);
    if (r.tweet_type == TweetType::Retweet)
      r.text = "RT @utente" + std::to_string(rng.index(500)) + ": " + r.text;
    return r;
  };

  corpus.records.reserve(opt.records);
  for (std::size_t i = 0; i < opt.records; ++i) corpus.records.push_back(make(i, region_of[i], "11"));
  std::stable_sort(corpus.records.begin(), corpus.records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.created_at, a.id) < std::tie(b.created_at, b.id);
  });

  // Records ingest has to drop.
  const std::size_t dups = std::max<std::size_t>(1, opt.records / 100);
  for (std::size_t i = 0; i < dups; ++i) corpus.noise.push_back(corpus.records[rng.index(corpus.records.size())]);
  const std::size_t extra = std::max<std::size_t>(1, opt.records / 500);
  for (std::size_t i = 0; i < extra; ++i) {
    auto r = make(i, region_of[rng.index(region_of.size())], "12");
    r.created_at = rng.chance(0.5) ? Instant{first - days{1 + static_cast<int>(rng.index(7))}}
                                   : Instant{periods.end() + days{static_cast<int>(rng.index(7))}};
    r.created_at += seconds{rng.index(86400)};
    corpus.noise.push_back(std::move(r));
    auto en = make(i, region_of[rng.index(region_of.size())], "13");
    en.language = "en";
    corpus.noise.push_back(std::move(en));
  }
  return corpus;
}

namespace {

std::string twitter_time(Instant t) {
  static constexpr std::array<const char*, 7> kDays = {"Sun", "Mon", "Tue", "Wed", "Thu", "Fri", "Sat"};
  static constexpr std::array<const char*, 12> kMonths = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                          "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  const Day d = utc_day(t);
  const year_month_day ymd{d};
  const hh_mm_ss<seconds> tod{t - d};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%s %s %02u %02d:%02d:%02d +0000 %04d",
                kDays[weekday{d}.c_encoding()], kMonths[unsigned(ymd.month()) - 1], unsigned(ymd.day()),
                int(tod.hours().count()), int(tod.minutes().count()), int(tod.seconds().count()),
                int(ymd.year()));
  return buf;
}

// Hydrated-tweet layout; the fixture config maps these names.
std::string twitter_line(const TweetRecord& r, bool explicit_retweet) {
  nlohmann::ordered_json j;
  j["id_str"] = r.id;
  j["created_at"] = twitter_time(r.created_at);
  j["full_text"] = r.text;
  j["lang"] = r.language;
  j["user"] = {{"location", r.user_location}};
  if (r.tweet_type == TweetType::Retweet && explicit_retweet)
    j["retweeted_status"] = {{"id_str", "9" + r.id}};
  return j.dump();
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + p.string());
  out << s;
}

}  // namespace

void write_fixture(const SynthCorpus& corpus, const fs::path& dir, std::uint64_t pipeline_seed,
                   std::size_t shards) {
  if (shards == 0) shards = 1;
  fs::create_directories(dir / "tweets");
  std::vector<std::ofstream> outs;
  for (std::size_t s = 0; s < shards; ++s) {
    char name[48];
    std::snprintf(name, sizeof name, "shard_%02zu.jsonl", s);
    outs.emplace_back(dir / "tweets" / name, std::ios::binary);
    if (!outs.back()) throw Error(ErrorCode::Io, "cannot write shard " + std::string(name));
    outs.back() << "# synthetic tweets, shard " << s << '\n';
  }
  std::size_t n = 0;
  for (const auto& r : corpus.records) {
    outs[n % shards] << twitter_line(r, n % 10 < 7) << '\n';
    ++n;
  }
  for (const auto& r : corpus.noise) {
    outs[n % shards] << twitter_line(r, true) << '\n';
    ++n;
  }

  write_text(dir / "regions.tsv", default_regions_tsv());
  write_text(dir / "gazetteer.tsv", default_gazetteer_tsv());

  static constexpr std::array<const char*, 9> kCoded = {"Spread", "Policy", "Italy", "Event",
                                                        "Solidarity", "External", "Person", "News",
                                                        "Football"};
  std::string codebook = "# term\tcategory\n";
  for (std::size_t i = 0; i < corpus.planted.size(); ++i)
    codebook += corpus.planted[i].term + '\t' + kCoded[i % kCoded.size()] + '\n';
  codebook +=
      "zona rossa\tPolicy\n#covid19\tSpread\n#coronavirus\tSpread\ncasa\tSolidarity\n"
      "governo\tPolicy\nospedale\tSpread\nscuola\tPolicy\nmascherine\tSpread\n";
  write_text(dir / "codebook.tsv", codebook);

  const nlohmann::ordered_json rules = {
      {"strip_mentions", true},
      {"strip_urls", true},
      {"aliases", {{"covid-19", "covid19"}, {"covid_19", "covid19"}}},
      {"boilerplate",
       {{{"prefix", "AGGIORNAMENTO AUTOMATICO:"}}, {{"substring", "condividi questo post"}}}}};
  write_text(dir / "rules.json", rules.dump(2) + "\n");

  const PeriodConfig defaults = PeriodConfig::defaults();
  nlohmann::ordered_json periods = nlohmann::ordered_json::array();
  for (const auto& p : defaults.periods())
    periods.push_back({{"name", p.name}, {"start", format_date(p.start)}});
  const nlohmann::ordered_json config = {
      {"inputs", {"tweets/*.jsonl"}},
      {"field_map",
       {{"id", "id_str"},
        {"created_at", "created_at"},
        {"text", "full_text"},
        {"user_location", "user.location"},
        {"retweet", "retweeted_status"},
        {"language", "lang"}}},
      {"languages", {"it"}},
      {"cleaning_rules", "rules.json"},
      {"gazetteer", "gazetteer.tsv"},
      {"regions", "regions.tsv"},
      {"codebook", "codebook.tsv"},
      {"periods", {{"list", periods}, {"end", format_date(defaults.end())}}},
      {"ngrams", {{"pmi_mass", 0.75}, {"freq_mass", 0.15}, {"pool_orders", false}}},
      {"salience",
       {{"min_count", 5}, {"document_counts", false}, {"beta", 1.0}, {"top_k", 10}, {"depth", 100}}},
      {"clustering",
       {{"k_min", 2},
        {"k_max", 8},
        {"restarts", 20},
        {"max_iter", 300},
        {"tol", 1e-6},
        {"input", "normalized"},
        {"smoothing_window", 1},
        {"epicentre_period", "Initial"}}},
      {"coding", {{"row_convention", "include_uncoded"}, {"column_convention", "exclude_uncoded"}}},
      {"seed", pipeline_seed},
      {"output", {{"dir", "out"}, {"plotdata", false}}}};
  write_text(dir / "config.json", config.dump(2) + "\n");
}

}  // namespace stcorpus
