#include "skewsim/config.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace skewsim;

namespace {

std::string error_of(const ArchConfig& cfg) {
    try {
        validate_config(cfg);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Config, DefaultsAreValid) {
    const ArchConfig cfg;
    EXPECT_EQ(validate_config(cfg), cfg);
    EXPECT_EQ(cfg.tuples_per_fetch(), 8u);
    EXPECT_EQ(cfg.total_pes(), 16u);
}

TEST(Config, TooManySecondaries) {
    ArchConfig cfg;
    cfg.x_secpe = 16;
    EXPECT_NE(error_of(cfg).find("x_secpe exceeds M-1"), std::string::npos);
    cfg.x_secpe = 15;
    EXPECT_EQ(error_of(cfg), "");
}

TEST(Config, TupleWidthMustDivideInterface) {
    ArchConfig cfg;
    cfg.w_tuple = 12;
    EXPECT_NE(error_of(cfg).find("w_tuple must divide w_mem"), std::string::npos);
}

TEST(Config, OtherBounds) {
    ArchConfig cfg;
    cfg.throughput_threshold = 1.5;
    EXPECT_NE(error_of(cfg), "");
    cfg = {};
    cfg.channel_depth = 7;  // fewer slots than router lanes
    EXPECT_NE(error_of(cfg).find("channel_depth must be at least n_prepe"), std::string::npos);
    cfg = {};
    cfg.n_prepe = 17;
    EXPECT_NE(error_of(cfg), "");
    cfg = {};
    cfg.m_pripe = 0;
    EXPECT_NE(error_of(cfg), "");
}

TEST(Config, ParsesKeyValueWithComments) {
    std::istringstream in("# sizing\nm_pripe = 32\nx_secpe=7   # helpers\n\nthroughput_threshold = 0\n");
    const auto cfg = parse_config(in);
    EXPECT_EQ(cfg.m_pripe, 32u);
    EXPECT_EQ(cfg.x_secpe, 7u);
    EXPECT_EQ(cfg.throughput_threshold, 0.0);
    EXPECT_EQ(cfg.n_prepe, 8u);
}

TEST(Config, UnknownKeyReportsLine) {
    std::istringstream in("m_pripe = 16\nbogus = 3\n");
    try {
        parse_config(in);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
        EXPECT_NE(msg.find("bogus"), std::string::npos) << msg;
    }
}

TEST(Config, MalformedValueReportsLine) {
    std::istringstream in("m_pripe = sixteen\n");
    try {
        parse_config(in);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
    }
    std::istringstream no_eq("m_pripe 16\n");
    EXPECT_THROW(parse_config(no_eq), ConfigError);
}

TEST(Config, WriteThenParseRoundTrips) {
    ArchConfig cfg;
    cfg.m_pripe = 8;
    cfg.x_secpe = 3;
    cfg.throughput_threshold = 0.65;
    cfg.seed = 99;
    std::stringstream buf;
    write_config(buf, cfg);
    EXPECT_EQ(parse_config(buf), cfg);
}

TEST(Config, MissingFile) {
    EXPECT_THROW(load_config_file("/nonexistent/skewsim.cfg"), ConfigError);
}
