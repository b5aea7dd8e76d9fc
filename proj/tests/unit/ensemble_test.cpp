#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <tuple>

#include "oracles.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"
#include "wsd/ensemble.hpp"
#include "wsd/error.hpp"

namespace wsd {
namespace {

using Model = std::shared_ptr<const NaiveBayesModel>;

// One tiny trained model per grid spec; only the spec matters to selection.
const std::vector<Model>& grid_models() {
  static const std::vector<Model> models = [] {
    const Corpus c("t", {"A", "B"},
                   {Instance{"1", "A", {"x", "t", "y"}, 1},
                    Instance{"2", "B", {"z", "t", "w"}, 1}});
    std::vector<Model> out;
    for (const auto& spec : grid_specs()) {
      out.push_back(std::make_shared<const NaiveBayesModel>(NaiveBayesModel::train(c, spec)));
    }
    return out;
  }();
  return models;
}

ClassifierGrid grid_with(const std::function<double(const WindowSpec&)>& acc) {
  std::vector<GridEntry> entries;
  const auto& specs = grid_specs();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    entries.push_back(GridEntry{specs[i], grid_models()[i], acc(specs[i])});
  }
  return ClassifierGrid(std::move(entries));
}

// Published devtest grids: rows are the right window 50,25,10,5,4,3,2,1,0,
// columns the left window 0,1,2,3,4,5,10,25,50.
using Table = std::array<std::array<double, 9>, 9>;

const Table kLine = {{
    {.63, .73, .80, .82, .83, .83, .83, .83, .83},
    {.63, .74, .80, .82, .84, .83, .83, .83, .83},
    {.62, .75, .81, .82, .83, .83, .83, .83, .84},
    {.61, .75, .80, .81, .82, .82, .82, .82, .83},
    {.60, .73, .80, .82, .82, .82, .82, .82, .82},
    {.58, .73, .79, .82, .83, .83, .82, .81, .82},
    {.53, .71, .79, .81, .82, .82, .81, .81, .81},
    {.42, .68, .78, .79, .80, .79, .80, .81, .81},
    {.14, .58, .73, .77, .79, .79, .79, .79, .80},
}};

const Table kInterest = {{
    {.74, .80, .82, .83, .83, .83, .82, .80, .81},
    {.73, .80, .82, .83, .83, .83, .81, .80, .80},
    {.75, .82, .84, .84, .84, .84, .82, .81, .81},
    {.73, .83, .85, .86, .85, .85, .83, .81, .81},
    {.72, .83, .85, .85, .84, .84, .83, .81, .80},
    {.70, .84, .86, .86, .86, .85, .83, .81, .80},
    {.66, .83, .85, .86, .86, .84, .83, .80, .80},
    {.63, .82, .85, .85, .86, .85, .82, .81, .80},
    {.53, .72, .77, .78, .79, .77, .77, .76, .75},
}};

double table_value(const Table& t, const WindowSpec& spec) {
  const std::size_t row = 8 - window_size_index(spec.right());
  return t[row][window_size_index(spec.left())];
}

std::map<std::size_t, WindowSpec> selected(const ClassifierGrid& grid) {
  std::map<std::size_t, WindowSpec> out;
  const Ensemble e = select_members(grid);
  for (const auto& m : e.members()) out.emplace(m.category.index(), m.spec);
  return out;
}

TEST(Selection, LineTableMembers) {
  const auto grid = grid_with([](const WindowSpec& s) { return table_value(kLine, s); });
  const auto got = selected(grid);
  const std::vector<WindowSpec> expected = {
      {2, 2}, {2, 4}, {2, 10}, {4, 2}, {4, 3}, {4, 25}, {10, 2}, {50, 5}, {50, 10}};
  ASSERT_EQ(got.size(), 9u);
  for (const auto& spec : expected) {
    const auto it = got.find(category_of(spec).index());
    ASSERT_NE(it, got.end());
    EXPECT_EQ(it->second, spec) << to_string(category_of(spec));
  }
}

TEST(Selection, InterestTableMembers) {
  const auto grid = grid_with([](const WindowSpec& s) { return table_value(kInterest, s); });
  const auto got = selected(grid);
  // medium-left/narrow-right is a three-way tie at .86 in the rounded table
  // and is left out; the tie rule picks (3,2) there.
  const std::vector<WindowSpec> expected = {
      {2, 1}, {2, 3}, {2, 10}, {3, 3}, {3, 10}, {10, 2}, {10, 3}, {10, 10}};
  for (const auto& spec : expected) {
    EXPECT_EQ(got.at(category_of(spec).index()), spec) << to_string(category_of(spec));
  }
  EXPECT_EQ(got.at(RangeCategory{Range::medium, Range::narrow}.index()), WindowSpec(3, 2));
}

TEST(Selection, AllEqualPicksSmallestWindows) {
  const auto got = selected(grid_with([](const WindowSpec&) { return 0.5; }));
  EXPECT_EQ(got.at(0), WindowSpec(0, 0));
  EXPECT_EQ(got.at(RangeCategory{Range::medium, Range::medium}.index()), WindowSpec(3, 3));
  EXPECT_EQ(got.at(RangeCategory{Range::wide, Range::narrow}.index()), WindowSpec(10, 0));
  EXPECT_EQ(got.at(8), WindowSpec(10, 10));
}

TEST(Selection, UniqueMaximumWins) {
  const auto got = selected(grid_with(
      [](const WindowSpec& s) { return s == WindowSpec(1, 2) ? 0.9 : 0.8; }));
  EXPECT_EQ(got.at(0), WindowSpec(1, 2));
}

TEST(Selection, OptimalUnderTieRuleForRandomGrids) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> level(0, 3);  // few levels, many ties
  for (int trial = 0; trial < 200; ++trial) {
    std::array<double, 81> acc;
    for (auto& a : acc) a = level(rng) / 4.0;
    const auto grid = grid_with([&](const WindowSpec& s) { return acc[s.grid_index()]; });
    const Ensemble e = select_members(grid);
    for (const auto& m : e.members()) {
      EXPECT_EQ(m.category, category_of(m.spec));
      for (const auto& other : category_specs(m.category)) {
        const double a = acc[other.grid_index()];
        ASSERT_LE(a, m.devtest_accuracy);
        if (a == m.devtest_accuracy) {
          const auto key = [](const WindowSpec& s) {
            return std::tuple(s.total(), s.left(), s.right());
          };
          EXPECT_LE(key(m.spec), key(other));
        }
      }
    }
  }
}

TEST(Selection, All81AndSingleCategory) {
  const auto grid = grid_with([](const WindowSpec&) { return 0.5; });
  EXPECT_EQ(select_members(grid, VoteRule::parse("all81")).members().size(), 81u);
  const auto cat = select_members(grid, VoteRule::parse("category=wide,medium"));
  ASSERT_EQ(cat.members().size(), 9u);
  for (const auto& m : cat.members()) {
    EXPECT_EQ(m.category, (RangeCategory{Range::wide, Range::medium}));
  }
}

TEST(Grid, RejectsMisorderedEntries) {
  std::vector<GridEntry> entries;
  for (std::size_t i = 0; i < 81; ++i) {
    entries.push_back(GridEntry{grid_specs()[i], grid_models()[i], 0.0});
  }
  std::swap(entries[3], entries[4]);
  EXPECT_THROW(ClassifierGrid{entries}, InvalidArgument);
  entries.pop_back();
  EXPECT_THROW(ClassifierGrid{entries}, InvalidArgument);
}

// A model with no vocabulary: it always picks its largest prior and its log
// joint is ln p(s) whatever the instance.
Model prior_model(const WindowSpec& spec, std::vector<double> priors) {
  std::vector<std::string> senses;
  std::vector<std::size_t> counts;
  for (std::size_t s = 0; s < priors.size(); ++s) {
    senses.push_back(std::string(1, static_cast<char>('A' + s)));
    counts.push_back(10);
  }
  return std::make_shared<const NaiveBayesModel>(NaiveBayesModel::from_parameters(
      spec, kDefaultEpsilon, ScoringMode::bernoulli, std::move(senses), std::move(counts),
      std::move(priors), {}, {}, {}));
}

std::vector<Member> members_from(const std::vector<std::vector<double>>& priors) {
  std::vector<Member> out;
  for (std::size_t c = 0; c < priors.size(); ++c) {
    const auto cat = RangeCategory::from_index(c);
    const auto spec = category_specs(cat).front();
    out.push_back(Member{cat, spec, prior_model(spec, priors[c]), 0.5});
  }
  return out;
}

Corpus half(const Corpus& c, std::size_t parity) {
  std::vector<std::size_t> pos;
  for (std::size_t i = parity; i < c.size(); i += 2) pos.push_back(i);
  return c.subset(pos);
}

const Instance kAny{"q", "A", {"a", "t", "b"}, 1};

TEST(Vote, Unanimous) {
  const Ensemble e(members_from(std::vector(9, std::vector{0.2, 0.7, 0.1})), VoteRule{});
  const auto t = e.tally(kAny);
  EXPECT_EQ(t.votes, (std::vector<std::size_t>{0, 9, 0}));
  EXPECT_EQ(e.vote(kAny), "B");
}

TEST(Vote, FiveToFour) {
  std::vector<std::vector<double>> p(9, {0.6, 0.4});
  for (std::size_t i = 0; i < 5; ++i) p[i] = {0.1, 0.9};  // B is confident
  for (std::size_t i = 5; i < 9; ++i) p[i] = {0.99, 0.01};
  const Ensemble e(members_from(p), VoteRule{});
  EXPECT_EQ(e.tally(kAny).votes, (std::vector<std::size_t>{4, 5}));
  EXPECT_EQ(e.vote(kAny), "B");
  // The weighted rule follows the summed log joint instead.
  const Ensemble w(members_from(p), VoteRule::parse("weighted"));
  EXPECT_EQ(w.vote(kAny), "A");
}

TEST(Vote, TiedVotesGoToLargerSummedLogJoint) {
  std::vector<std::vector<double>> p;
  for (int i = 0; i < 4; ++i) p.push_back({0.5, 0.3, 0.2});
  for (int i = 0; i < 4; ++i) p.push_back({0.3, 0.6, 0.1});
  p.push_back({0.2, 0.2, 0.6});
  const Ensemble e(members_from(p), VoteRule{});
  const auto t = e.tally(kAny);
  EXPECT_EQ(t.votes, (std::vector<std::size_t>{4, 4, 1}));
  const double a = 4 * std::log(0.5) + 4 * std::log(0.3) + std::log(0.2);
  const double b = 4 * std::log(0.3) + 4 * std::log(0.6) + std::log(0.2);
  EXPECT_NEAR(t.summed_log_joint[0], a, 1e-12);
  EXPECT_NEAR(t.summed_log_joint[1], b, 1e-12);
  ASSERT_GT(b, a);
  EXPECT_EQ(e.vote(kAny), "B");
}

TEST(Vote, TiedMemberVotesForEarlierSense) {
  std::vector<std::vector<double>> p;
  for (int i = 0; i < 4; ++i) p.push_back({0.6, 0.4});
  for (int i = 0; i < 4; ++i) p.push_back({0.4, 0.6});
  p.push_back({0.5, 0.5});  // tie inside the model: equal counts, sense A
  const Ensemble e(members_from(p), VoteRule{});
  EXPECT_EQ(e.tally(kAny).votes, (std::vector<std::size_t>{5, 4}));
  p[8] = {0.4, 0.6};
  p[0] = {0.5, 0.5};
  const Ensemble f(members_from(p), VoteRule{});
  EXPECT_EQ(f.tally(kAny).votes, (std::vector<std::size_t>{4, 5}));
}

TEST(Vote, WinnerGetsAtLeastItsShareOfVotes) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 4;
    std::vector<std::vector<double>> p(9);
    for (auto& row : p) {
      double sum = 0;
      for (std::size_t s = 0; s < n; ++s) sum += row.emplace_back(u(rng));
      for (auto& x : row) x /= sum;
    }
    const Ensemble e(members_from(p), VoteRule{});
    const auto t = e.tally(kAny);
    EXPECT_EQ(t.votes[t.winner], *std::max_element(t.votes.begin(), t.votes.end()));
    EXPECT_GE(t.votes[t.winner], (9 + n - 1) / n);
  }
}

TEST(Vote, MemberOrderDoesNotMatter) {
  std::mt19937_64 rng(3);
  std::vector<std::vector<double>> p;
  for (int i = 0; i < 9; ++i) {
    const double a = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    p.push_back({a, 1 - a});
  }
  const auto members = members_from(p);
  const Ensemble ref(members, VoteRule::parse("weighted"));
  for (int i = 0; i < 20; ++i) {
    auto shuffled = members;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const Ensemble e(shuffled, VoteRule::parse("weighted"));
    const auto t = e.tally(kAny);
    const auto r = ref.tally(kAny);
    EXPECT_EQ(t.votes, r.votes);
    EXPECT_EQ(t.summed_log_joint, r.summed_log_joint);
    for (std::size_t m = 0; m < 9; ++m) EXPECT_EQ(e.members()[m].spec, ref.members()[m].spec);
  }
}

TEST(Vote, IdenticalMembersActLikeTheSingleModel) {
  std::mt19937_64 rng(21);
  testing::RandomCorpusOptions o;
  o.instances = 30;
  for (int trial = 0; trial < 30; ++trial) {
    const Corpus c = testing::random_corpus(rng, o);
    const auto model = std::make_shared<const NaiveBayesModel>(
        NaiveBayesModel::train(c, WindowSpec(2, 1)));
    std::vector<Member> members;
    for (std::size_t k = 0; k < 9; ++k) {
      const auto cat = RangeCategory::from_index(k);
      members.push_back(Member{cat, category_specs(cat).front(), model, 0.0});
    }
    const Ensemble e(members, VoteRule{});
    for (const auto& inst : c.instances()) EXPECT_EQ(e.vote(inst), model->classify(inst));
  }
}

TEST(Ensemble, RejectsBadMemberSets) {
  const auto good = members_from(std::vector(9, std::vector{0.5, 0.5}));
  EXPECT_THROW(Ensemble({}, VoteRule{}), InvalidArgument);
  auto short_set = good;
  short_set.pop_back();
  EXPECT_THROW(Ensemble(short_set, VoteRule{}), InvalidArgument);
  auto repeated = good;
  repeated[1] = repeated[0];
  EXPECT_THROW(Ensemble(repeated, VoteRule{}), InvalidArgument);
  auto mixed = good;
  mixed[4].model = prior_model(mixed[4].spec, {0.2, 0.3, 0.5});
  EXPECT_THROW(Ensemble(mixed, VoteRule{}), InvalidArgument);
  auto empty_model = good;
  empty_model[2].model.reset();
  EXPECT_THROW(Ensemble(empty_model, VoteRule{}), InvalidArgument);
  EXPECT_THROW(Ensemble(good, VoteRule::parse("all81")), InvalidArgument);
  EXPECT_THROW(Ensemble(good, VoteRule::parse("category=narrow,narrow")), InvalidArgument);
}

TEST(Ensemble, ClassifyBatch) {
  const Ensemble e(members_from(std::vector(9, std::vector{0.3, 0.7})), VoteRule{});
  EXPECT_TRUE(e.classify_batch({}).empty());
  const std::vector<Instance> one{kAny};
  EXPECT_EQ(e.classify_batch(one), (std::vector<std::string>{"B"}));

  std::mt19937_64 rng(8);
  testing::RandomCorpusOptions o;
  o.instances = 40;
  const Corpus c = testing::random_corpus(rng, o);
  const Ensemble grid_e = select_members(train_grid(half(c, 0), half(c, 1)));
  std::vector<Instance> batch(c.instances().begin(), c.instances().end());
  const auto labels = grid_e.classify_batch(batch);
  for (std::size_t i = 0; i < batch.size(); ++i) EXPECT_EQ(labels[i], grid_e.vote(batch[i]));
  std::vector<std::size_t> order(batch.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Instance> permuted;
  for (const auto i : order) permuted.push_back(batch[i]);
  const auto permuted_labels = grid_e.classify_batch(permuted);
  for (std::size_t i = 0; i < order.size(); ++i) {
    EXPECT_EQ(permuted_labels[i], labels[order[i]]);
  }
}

TEST(VoteRule, ParseAndPrint) {
  for (const char* text : {"majority", "weighted", "all81", "category=narrow,wide"}) {
    EXPECT_EQ(to_string(VoteRule::parse(text)), text);
  }
  const auto r = VoteRule::parse("category=medium,narrow");
  EXPECT_EQ(r.kind, VoteKind::single_category);
  EXPECT_EQ(r.category, (RangeCategory{Range::medium, Range::narrow}));
  for (const char* bad : {"", "Majority", "category=", "category=narrow", "category=tiny,wide",
                          "all80"}) {
    EXPECT_THROW(VoteRule::parse(bad), InvalidArgument) << bad;
  }
}

TEST(TrainGrid, SeparableFixture) {
  const Corpus c = synth::generate(synth::separable(3));
  const Corpus train = half(c, 0);
  const Corpus dev = half(c, 1);
  const auto grid = train_grid(train, dev);
  ASSERT_EQ(grid.entries().size(), 81u);
  // (0,0) always answers the training majority.
  const auto& majority = c.senses()[testing::majority_baseline(train)];
  const auto hits = std::count_if(dev.instances().begin(), dev.instances().end(),
                                  [&](const Instance& i) { return i.sense == majority; });
  EXPECT_DOUBLE_EQ(grid.at(WindowSpec(0, 0)).devtest_accuracy,
                   static_cast<double>(hits) / static_cast<double>(dev.size()));
  for (const auto& e : grid.entries()) {
    EXPECT_EQ(e.model->spec(), e.spec);
    EXPECT_EQ(e.model->instance_count(), train.size());
    if (e.spec.left() >= 1) EXPECT_EQ(e.devtest_accuracy, 1.0) << to_string(e.spec);
  }
}

TEST(TrainGrid, ThreadCountDoesNotChangeResults) {
  std::mt19937_64 rng(4);
  testing::RandomCorpusOptions o;
  o.instances = 60;
  const Corpus c = testing::random_corpus(rng, o);
  GridOptions one;
  one.threads = 1;
  GridOptions four;
  four.threads = 4;
  const auto a = train_grid(half(c, 0), half(c, 1), one);
  const auto b = train_grid(half(c, 0), half(c, 1), four);
  for (std::size_t i = 0; i < 81; ++i) {
    EXPECT_EQ(a.entries()[i].devtest_accuracy, b.entries()[i].devtest_accuracy);
    EXPECT_TRUE(*a.entries()[i].model == *b.entries()[i].model);
  }
}

TEST(TrainGrid, Errors) {
  const Corpus c = synth::generate(synth::separable(1));
  EXPECT_THROW(train_grid(half(c, 0), half(c, 0)), ContaminationError);
  const std::vector<std::size_t> first{0};
  EXPECT_THROW(train_grid(half(c, 0), c.subset(first)), ContaminationError);
  EXPECT_THROW(train_grid(Corpus("line", {"a"}, {}), half(c, 1)), TrainingError);
  EXPECT_THROW(train_grid(half(c, 0), Corpus("line", {"a"}, {})), TrainingError);
}

TEST(Manifest, RoundTrip) {
  const Corpus c = synth::generate(synth::separable(2));
  const auto grid = train_grid(half(c, 0), half(c, 1));
  testing::TempDir dir;
  for (const char* rule : {"majority", "weighted", "all81", "category=wide,wide"}) {
    const Ensemble e = select_members(grid, VoteRule::parse(rule));
    const auto sub = dir.file(rule[0] == 'c' ? "cat" : rule);
    save_manifest(e, sub);
    const Ensemble loaded = load_manifest(sub + "/manifest.tsv");
    EXPECT_EQ(loaded.rule(), e.rule());
    ASSERT_EQ(loaded.members().size(), e.members().size());
    for (std::size_t i = 0; i < e.members().size(); ++i) {
      EXPECT_EQ(loaded.members()[i].spec, e.members()[i].spec);
      EXPECT_EQ(loaded.members()[i].category, e.members()[i].category);
      EXPECT_EQ(loaded.members()[i].devtest_accuracy, e.members()[i].devtest_accuracy);
      EXPECT_TRUE(*loaded.members()[i].model == *e.members()[i].model);
    }
    for (const auto& inst : c.instances()) ASSERT_EQ(loaded.vote(inst), e.vote(inst));
  }
}

TEST(Manifest, BadFilesRaiseLoadErrors) {
  testing::TempDir dir;
  EXPECT_THROW(load_manifest(dir.file("missing.tsv")), LoadError);
  EXPECT_THROW(load_manifest(dir.write("a.tsv", "")), TruncatedError);
  EXPECT_THROW(load_manifest(dir.write("b.tsv", "something else\n")), FormatError);
  EXPECT_THROW(load_manifest(dir.write("c.tsv", "wsd-ensemble\t9\n")), VersionError);
  EXPECT_THROW(load_manifest(dir.write("d.tsv", "wsd-ensemble\t1\nvote\tmajority\nmembers\t9\n")),
               TruncatedError);

  const Ensemble e(members_from(std::vector(9, std::vector{0.5, 0.5})), VoteRule{});
  save_manifest(e, dir.file("m"));
  std::filesystem::remove(dir.path() / "m" / "models" / "nb-0-0.model");
  EXPECT_THROW(load_manifest(dir.file("m/manifest.tsv")), LoadError);
}

}  // namespace
}  // namespace wsd
