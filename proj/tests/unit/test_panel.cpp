#include <gtest/gtest.h>

#include <cmath>

#include <sstream>

#include "schaake/errors.hpp"
#include "schaake/panel.hpp"
#include "synthetic.hpp"

namespace schaake {
namespace {

std::string panel_csv(const std::vector<Date>& dates, double offset = 0.0) {
    std::ostringstream os;
    os << "date,hour,value\n";
    for (std::size_t t = 0; t < dates.size(); ++t) {
        for (std::size_t h = 1; h <= kHours; ++h) os << dates[t] << ',' << h << ',' << (offset + t * 100.0 + h) << '\n';
    }
    return os.str();
}

LoadResult parse(const std::string& text, LoadOptions options = {}) {
    std::istringstream in(text);
    return parse_panel_csv(in, "prices.csv", options);
}

TEST(Panel, ParsesLongFormat) {
    const auto res = parse(panel_csv({"2020-01-01", "2020-01-02"}));
    EXPECT_TRUE(res.warnings.empty());
    ASSERT_EQ(res.panel.days(), 2u);
    EXPECT_EQ(res.panel.date(1), "2020-01-02");
    EXPECT_DOUBLE_EQ(res.panel(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(res.panel(1, 23), 124.0);
}

TEST(Panel, RowsAreSortedByDateRegardlessOfFileOrder) {
    std::string text = "date,hour,value\n";
    for (const Date d : {"2020-01-03", "2020-01-01"}) {
        for (int h = 24; h >= 1; --h) text += d + "," + std::to_string(h) + "," + std::to_string(h) + "\n";
    }
    const auto res = parse(text);
    EXPECT_EQ(res.panel.dates(), (std::vector<Date>{"2020-01-01", "2020-01-03"}));
    EXPECT_DOUBLE_EQ(res.panel(0, 4), 5.0);
}

TEST(Panel, IncompleteDayIsDroppedWithWarning) {
    auto text = panel_csv({"2020-01-01", "2020-01-02"});
    text = text.substr(0, text.rfind("2020-01-02,24"));
    const auto res = parse(text);
    ASSERT_EQ(res.panel.days(), 1u);
    ASSERT_EQ(res.warnings.size(), 1u);
    EXPECT_NE(res.warnings[0].find("2020-01-02 has 23 of 24 hours"), std::string::npos);
}

TEST(Panel, IncompleteDayIsAnErrorInStrictMode) {
    auto text = panel_csv({"2020-01-01"});
    text = text.substr(0, text.rfind("2020-01-01,24"));
    EXPECT_THROW(parse(text, LoadOptions{false}), DataError);
}

TEST(Panel, HourOutOfRangeNamesTheLine) {
    try {
        parse("date,hour,value\n2020-01-01,25,3.0\n");
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("prices.csv:2"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("outside 1..24"), std::string::npos);
    }
}

TEST(Panel, RejectsDuplicatesBadHeaderAndGarbage) {
    EXPECT_THROW(parse("date,hour,value\n2020-01-01,1,3\n2020-01-01,1,4\n"), DataError);
    EXPECT_THROW(parse("day,h,v\n"), DataError);
    EXPECT_THROW(parse("date,hour,value\n2020-13-01,1,3\n"), DataError);
    EXPECT_THROW(parse("date,hour,value\n2020-01-01,1,abc\n"), DataError);
    EXPECT_THROW(parse("date,hour,value\n2020-01-01,1,nan\n"), DataError);
    EXPECT_THROW(parse(""), DataError);
}

TEST(Panel, WriteThenParseRoundTrips) {
    const auto pair = testing::gaussian_copula_panels(5, 0.5, 3.0, 1);
    std::ostringstream os;
    write_panel_csv(os, pair.real);
    const auto back = parse(os.str()).panel;
    EXPECT_EQ(back.dates(), pair.real.dates());
    for (std::size_t i = 0; i < back.values().size(); ++i) EXPECT_EQ(back.values()[i], pair.real.values()[i]);
}

TEST(Panel, ErrorsAreRealMinusForecast) {
    const auto real = parse(panel_csv({"2020-01-01"}, 10.0)).panel;
    const auto fc = parse(panel_csv({"2020-01-01"})).panel;
    const auto err = compute_errors(real, fc);
    for (double v : err.values()) EXPECT_DOUBLE_EQ(v, 10.0);
}

TEST(Panel, MisalignedPanelsAreRejected) {
    const auto a = parse(panel_csv({"2020-01-01", "2020-01-02"})).panel;
    const auto b = parse(panel_csv({"2020-01-01", "2020-01-03"})).panel;
    EXPECT_THROW(compute_errors(a, b), DataError);
    const auto [ia, ib] = intersect_dates(a, b);
    EXPECT_EQ(ia.dates(), std::vector<Date>{"2020-01-01"});
    EXPECT_EQ(ib.dates(), ia.dates());
}

TEST(Panel, ConstructorValidatesShapeAndOrder) {
    EXPECT_THROW(HourlyPanel({"2020-01-01"}, std::vector<double>(23, 0.0)), DataError);
    EXPECT_THROW(HourlyPanel({"2020-01-02", "2020-01-01"}, std::vector<double>(48, 0.0)), DataError);
}

TEST(Panel, ColumnAndSlice) {
    const auto p = parse(panel_csv({"2020-01-01", "2020-01-02", "2020-01-03"})).panel;
    EXPECT_EQ(p.column(2, 1, 3), (std::vector<double>{103.0, 203.0}));
    const auto s = p.slice(1, 3);
    EXPECT_EQ(s.date(0), "2020-01-02");
    EXPECT_EQ(p.find("2020-01-03"), 2u);
    EXPECT_EQ(p.find("2021-01-01"), p.days());
}

TEST(Panel, IsoDates) {
    EXPECT_TRUE(is_iso_date("2020-02-29"));
    EXPECT_FALSE(is_iso_date("2021-02-29"));
    EXPECT_FALSE(is_iso_date("2020-1-01"));
}

}  // namespace
}  // namespace schaake
