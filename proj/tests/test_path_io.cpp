#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "mmsde/path_io.hpp"
#include "test_util.hpp"

using namespace mmsde;

namespace {

StepPath sample() {
    Matrix v(2, 4);
    v << 0.1, 1.0 / 3.0, -2.5e-300, 7.0, 1e17, -0.0, 3.141592653589793, 2.0 / 7.0;
    return StepPath(Partition({0.0, 0.1, 0.7, 1.0}), v);
}

}  // namespace

TEST(Real, ShortestRoundTrip) {
    for (const double v : {0.1, 1.0 / 3.0, 1e-310, -7.25, 123456789.0, 0.0}) {
        EXPECT_EQ(parse_real(format_real(v)), v);
    }
    EXPECT_EQ(format_real(0.5), "0.5");
    EXPECT_EQ(format_real(4.0), "4");
    EXPECT_THROW(parse_real("1.0x"), std::invalid_argument);
    EXPECT_THROW(parse_real(""), std::invalid_argument);
}

TEST(Format, Names) {
    EXPECT_EQ(parse_format("csv"), Format::csv);
    EXPECT_EQ(parse_format("jsonl"), Format::jsonl);
    EXPECT_THROW(parse_format("xml"), std::invalid_argument);
    EXPECT_EQ(format_for_file("a/b.jsonl"), Format::jsonl);
    EXPECT_EQ(format_for_file("a/b.csv"), Format::csv);
}

TEST(PathIo, RoundTripIsExact) {
    for (const Format f : {Format::csv, Format::jsonl}) {
        std::stringstream s;
        write_path(s, sample(), f);
        const StepPath back = read_path(s, f);
        EXPECT_EQ(back.partition(), sample().partition());
        EXPECT_EQ(back.values(), sample().values());
    }
}

TEST(PathIo, CsvHeader) {
    std::stringstream s;
    write_path_csv(s, sample());
    std::string header;
    std::getline(s, header);
    EXPECT_EQ(header, "time,v_1,v_2");
}

TEST(PathIo, RejectsMalformedInput) {
    std::stringstream bad_times("time,v_1\n0,1\n0,2\n");
    EXPECT_THROW(read_path_csv(bad_times), std::invalid_argument);
    std::stringstream ragged("time,v_1\n0,1\n1,2,3\n");
    EXPECT_THROW(read_path_csv(ragged), std::invalid_argument);
    std::stringstream json("{\"t\": 0, \"v\": [1]}\n{\"t\": 1}\n");
    EXPECT_THROW(read_path_jsonl(json), std::invalid_argument);
}

TEST(Labelled, RoundTripWithMetadata) {
    LabelledPaths table;
    table.metadata = {{"scheme", "euler"}, {"n", "16"}};
    table.paths = {{"x", sample()}, {"k", sample() - sample()}};
    for (const Format f : {Format::csv, Format::jsonl}) {
        std::stringstream s;
        write_labelled(s, table, f);
        const LabelledPaths back = read_labelled(s, f);
        EXPECT_EQ(back.metadata, table.metadata);
        ASSERT_EQ(back.paths.size(), 2u);
        EXPECT_EQ(back.at("x").values(), sample().values());
        EXPECT_EQ(back.at("k").values().norm(), 0.0);
        EXPECT_THROW(back.at("y"), std::out_of_range);
    }
}
