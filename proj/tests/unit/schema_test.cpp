#include <gtest/gtest.h>

#include <random>

#include "oracles/oracles.hpp"
#include "serefind/error.hpp"
#include "serefind/schema/registry.hpp"
#include "serefind/schema/schema.hpp"
#include "serefind/schema/values.hpp"
#include "serefind/schema/xml.hpp"
#include "support/fixtures.hpp"

using namespace serefind;
using namespace serefind::schema;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kBadRequest;
}

CategorySchema event_schema() { return parse_schema(fixtures::kEventXml); }

}  // namespace

TEST(SchemaXml, ParsesEventSchema) {
  const auto s = event_schema();
  EXPECT_EQ(s.schema_id, "O198");
  EXPECT_EQ(s.category, "event");
  EXPECT_EQ(s.creator, "admin");
  EXPECT_EQ(s.version, 1);
  ASSERT_EQ(s.fields.size(), 2u);
  EXPECT_EQ(s.fields[0], (FieldSpec{"Title", InputType::kTextbox, DataType::kText, true}));
  EXPECT_EQ(s.fields[1],
            (FieldSpec{"Date and Time", InputType::kTextbox, DataType::kDateTime, false}));
}

TEST(SchemaXml, EmptySchemaRejected) {
  EXPECT_EQ(code_of([] { parse_schema(R"(<schema id="X" category="c" creator="u"></schema>)"); }),
            ErrorCode::kEmptySchema);
}

TEST(SchemaXml, DuplicateLabelRejected) {
  EXPECT_EQ(code_of([] {
              parse_schema(R"(<schema id="X" category="c" creator="u">
                <field>Title</field><field data-type="currency">Price</field>
                <field>Price</field></schema>)");
            }),
            ErrorCode::kDuplicateFieldLabel);
}

TEST(SchemaXml, StructuralErrors) {
  EXPECT_EQ(code_of([] { parse_schema("<schema id='X' category='c'"); }),
            ErrorCode::kMalformedXml);
  EXPECT_EQ(code_of([] {
              parse_schema(R"(<schema id="X" category="c" creator="u"><field data-type="money">Title</field></schema>)");
            }),
            ErrorCode::kUnknownDataType);
  EXPECT_EQ(code_of([] {
              parse_schema(R"(<schema id="X" category="c" creator="u"><field>Title</field><field data-type="url" visibility-in-search-filter="true">Link</field></schema>)");
            }),
            ErrorCode::kInvalidFilterField);
  EXPECT_EQ(code_of([] {
              parse_schema(R"(<schema id="X" category="c" creator="u"><blob/></schema>)");
            }),
            ErrorCode::kUnknownElement);
  // Lenient mode skips what strict mode rejects.
  const auto s = parse_schema(
      R"(<schema id="X" category="c" creator="u" colour="red"><field hint="h">Title</field><blob/></schema>)",
      ParseMode::kLenient);
  EXPECT_EQ(s.fields.size(), 1u);
}

TEST(SchemaXml, EventRoundTrip) {
  const auto s = event_schema();
  EXPECT_EQ(parse_schema(serialize_schema(s)), s);
}

TEST(SchemaXml, SingleFieldEmitsOnlyNonDefaults) {
  CategorySchema s{"S1", "misc", "admin", 1, {{"Title", InputType::kTextbox, DataType::kText, false}}};
  const auto xml = serialize_schema(s);
  EXPECT_EQ(xml.find("input-type"), std::string::npos);
  EXPECT_EQ(xml.find("data-type"), std::string::npos);
  EXPECT_EQ(xml.find("visibility-in-search-filter"), std::string::npos);
  EXPECT_EQ(xml.find("version"), std::string::npos);
  std::size_t fields = 0;
  for (auto pos = xml.find("<field"); pos != std::string::npos; pos = xml.find("<field", pos + 1)) {
    ++fields;
  }
  EXPECT_EQ(fields, 1u);
  EXPECT_EQ(parse_schema(xml), s);
}

TEST(SchemaXml, GeneratedSchemasRoundTrip) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto s = fixtures::random_schema(rng, i);
    EXPECT_EQ(parse_schema(serialize_schema(s)), s) << serialize_schema(s);
  }
}

TEST(SchemaXml, FieldRequestRoundTrip) {
  const auto r = parse_field_request(fixtures::kCoverChargeXml);
  EXPECT_EQ(r, (FieldRequest{"event", "Cover Charge", DataType::kCurrency, "user001",
                             RequestStatus::kPending}));
  EXPECT_EQ(parse_field_request(serialize_field_request(r)), r);
}

TEST(Validate, EventExamples) {
  const auto s = event_schema();
  auto ok = validate_values(s, {{"Title", "Jazz night"}, {"Date and Time", "2012-05-01T19:00:00Z"}});
  EXPECT_TRUE(ok.ok());
  EXPECT_EQ(std::get<DateTimeValue>(ok.accepted.at("Date and Time")).at,
            fixtures::at("2012-05-01T19:00:00Z"));

  auto bad = validate_values(s, {{"Title", "Jazz night"}, {"Date and Time", "next friday"}});
  EXPECT_FALSE(bad.ok());
  EXPECT_EQ(bad.checks[1].label, "Date and Time");
  EXPECT_EQ(bad.checks[1].status, FieldStatus::kTypeError);

  auto missing = validate_values(s, {{"Date and Time", "2012-05-01"}});
  EXPECT_EQ(missing.checks[0].status, FieldStatus::kMissing);

  auto unknown = validate_values(s, {{"Title", "x"}, {"Colour", "red"}});
  EXPECT_FALSE(unknown.ok());
  EXPECT_EQ(unknown.checks.back().status, FieldStatus::kUnknownLabel);
}

TEST(Validate, CoverChargeRejectsThreeFractionDigits) {
  auto [v2, _] = apply_field_request(event_schema(), parse_field_request(fixtures::kCoverChargeXml),
                                     Decision::kApprove);
  auto r = validate_values(v2, {{"Title", "x"}, {"Cover Charge", "12.345"}});
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.checks[2].status, FieldStatus::kTypeError);
  EXPECT_FALSE(oracle::currency_ok("12.345"));
}

TEST(Validate, CurrencyGrammarMatchesRegexOracle) {
  std::mt19937_64 rng(11);
  const std::string alphabet = "0123456789.USDEURusd ,-$";
  for (int i = 0; i < 5000; ++i) {
    std::string s;
    const auto len = 1 + rng() % 12;
    for (std::size_t k = 0; k < len; ++k) s += alphabet[rng() % alphabet.size()];
    // Leading and trailing blanks are trimmed before validation.
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
    if (s.empty()) continue;
    const bool accepted = parse_value(DataType::kCurrency, s).value.has_value();
    EXPECT_EQ(accepted, oracle::currency_ok(s)) << "'" << s << "'";
  }
  for (const std::string s : {"12", "12.5", "12.50", "USD 12.50", "EUR12", "0.01"}) {
    EXPECT_TRUE(parse_value(DataType::kCurrency, s).value) << s;
    EXPECT_TRUE(oracle::currency_ok(s)) << s;
  }
}

TEST(Validate, CanonicalFormsRoundTrip) {
  const std::vector<std::pair<DataType, std::string>> cases = {
      {DataType::kText, "hello"},
      {DataType::kDateTime, "2012-05-01T19:00:00+02:00"},
      {DataType::kCurrency, "12.5"},
      {DataType::kNumber, "-3.25"},
      {DataType::kLocation, "39.2904,-76.6122"},
      {DataType::kUrl, "https://example.org/a?b=c"},
  };
  for (const auto& [type, raw] : cases) {
    auto v = parse_value(type, raw);
    ASSERT_TRUE(v.value) << raw << ": " << v.error;
    auto again = parse_value(type, to_canonical(*v.value));
    ASSERT_TRUE(again.value);
    EXPECT_EQ(*again.value, *v.value) << raw;
  }
  EXPECT_EQ(to_canonical(*parse_value(DataType::kCurrency, "12.5").value), "USD 12.50");
}

TEST(FilterSpec, EventYieldsTitleOnly) {
  const auto f = derive_filter_spec(event_schema());
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].label, "Title");
}

TEST(FilterSpec, NoFilterableFields) {
  CategorySchema s{"S", "c", "u", 1, {{"Title", InputType::kTextbox, DataType::kText, false}}};
  EXPECT_TRUE(derive_filter_spec(s).empty());
}

TEST(FilterSpec, MatchesDirectFilter) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto s = fixtures::random_schema(rng, i);
    std::vector<FieldSpec> expected;
    std::copy_if(s.fields.begin(), s.fields.end(), std::back_inserter(expected),
                 [](const FieldSpec& f) { return f.visible_in_search_filter; });
    EXPECT_EQ(derive_filter_spec(s), expected);
  }
}

TEST(FieldRequest, ApproveCoverCharge) {
  const auto v1 = event_schema();
  const auto req = parse_field_request(fixtures::kCoverChargeXml);
  auto [v2, decided] = apply_field_request(v1, req, Decision::kApprove);
  EXPECT_EQ(v2.version, 2);
  ASSERT_EQ(v2.fields.size(), v1.fields.size() + 1);
  EXPECT_TRUE(std::equal(v1.fields.begin(), v1.fields.end(), v2.fields.begin()));
  EXPECT_EQ(v2.fields.back(),
            (FieldSpec{"Cover Charge", InputType::kTextbox, DataType::kCurrency, false}));
  EXPECT_EQ(decided.status, RequestStatus::kApproved);
  EXPECT_EQ(v1.version, 1);  // input untouched
}

TEST(FieldRequest, RejectLeavesSchemaAlone) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto s = fixtures::random_schema(rng, i);
    FieldRequest r{s.category, "New Field " + std::to_string(i), DataType::kNumber, "u"};
    auto [same, decided] = apply_field_request(s, r, Decision::kReject);
    EXPECT_EQ(same, s);
    EXPECT_EQ(decided.status, RequestStatus::kRejected);
  }
}

TEST(FieldRequest, Errors) {
  const auto s = event_schema();
  EXPECT_EQ(code_of([&] {
              apply_field_request(s, {"event", "Title", DataType::kText, "u"}, Decision::kApprove);
            }),
            ErrorCode::kDuplicateFieldLabel);
  EXPECT_EQ(code_of([&] {
              apply_field_request(s, {"books", "X", DataType::kText, "u"}, Decision::kApprove);
            }),
            ErrorCode::kCategoryMismatch);
  FieldRequest done{"event", "X", DataType::kText, "u", RequestStatus::kApproved};
  EXPECT_EQ(code_of([&] { apply_field_request(s, done, Decision::kApprove); }),
            ErrorCode::kRequestNotPending);
}

TEST(FieldRequest, NewCategoryStartsFromTitleOnly) {
  auto pending = make_pending_category("rides", "user001", "R1");
  EXPECT_EQ(pending.version, 0);
  auto [v1, _] = apply_field_request(pending, {"rides", "Fare", DataType::kCurrency, "user001"},
                                     Decision::kApprove);
  EXPECT_EQ(v1.version, 1);
  EXPECT_EQ(v1.fields.size(), 2u);
  check_invariants(v1);
}

TEST(Registry, LoadDirectoryNamesBrokenFile) {
  fixtures::TempDir dir;
  fixtures::write_file(dir.path() / "event.xml", fixtures::kEventXml);
  fixtures::write_file(dir.path() / "broken.xml", "<schema id='x' category='broken'");
  try {
    SchemaRegistry::load_directory(dir.path());
    FAIL() << "expected SchemaLoadFailed";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaLoadFailed);
    EXPECT_NE(std::string(e.what()).find("broken.xml"), std::string::npos);
  }
}

TEST(Registry, VersionNeverRegresses) {
  SchemaRegistry reg;
  auto s = event_schema();
  s.version = 2;
  reg.put(s);
  s.version = 1;
  EXPECT_THROW(reg.put(s), Error);
  EXPECT_EQ(reg.get("event").version, 2);
}
