#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "reflect/core/error.hpp"
#include "reflect/core/lexicon.hpp"
#include "reflect/core/unicode.hpp"

using namespace reflect;

TEST(Utf8, DecodesMultiByteSequences) {
    const std::string s = "aä€😀";
    std::size_t pos = 0;
    EXPECT_EQ(utf8::decode(s, pos), U'a');
    EXPECT_EQ(utf8::decode(s, pos), U'ä');
    EXPECT_EQ(utf8::decode(s, pos), U'€');
    EXPECT_EQ(utf8::decode(s, pos), U'😀');
    EXPECT_EQ(pos, s.size());
}

TEST(Utf8, InvalidBytesBecomeReplacement) {
    const std::string s = "\xff" "a";
    std::size_t pos = 0;
    EXPECT_EQ(utf8::decode(s, pos), utf8::kReplacement);
    EXPECT_EQ(utf8::decode(s, pos), U'a');
}

TEST(Utf8, LowercasesGermanAndSpanishLetters) {
    EXPECT_EQ(utf8::to_lower("ÄÖÜ Straße ÁÉÑ"), "äöü straße áéñ");
}

TEST(Utf8, LengthAndOffsetsCountCodePoints) {
    const std::string s = "Müller übt.";
    EXPECT_EQ(utf8::length(s), 11u);
    // byte offset of "übt" is 8 (ü in Müller takes two bytes)
    EXPECT_EQ(s.find("übt"), 8u);
    EXPECT_EQ(utf8::code_point_offset(s, 8), 7u);
}

TEST(Utf8, TrimAndCountNonSpace) {
    EXPECT_EQ(utf8::trim("  a b \n"), "a b");
    EXPECT_EQ(utf8::trim("   "), "");
    EXPECT_EQ(utf8::count_non_space(" a b\tc "), 3u);
}

TEST(Lexicon, ParseTsvSkipsCommentsAndBlankLines) {
    const auto rows = parse_tsv("# comment\n\nweil\tcausal\r\n  obwohl \t concessive \n");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"weil", "causal"}));
    EXPECT_EQ(rows[1], (std::vector<std::string>{"obwohl", "concessive"}));
}

TEST(Lexicon, ParseWeightRejectsGarbage) {
    EXPECT_DOUBLE_EQ(parse_weight("0.5", "x"), 0.5);
    EXPECT_THROW(parse_weight("0.5x", "x"), Error);
}

TEST(Lexicon, MissingFileCarriesRequestedCode) {
    try {
        read_file("/nonexistent/file.tsv", Errc::schema_error);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::schema_error);
    }
}

TEST(PhraseLexicon, LongestEntryWinsAndMatchesDoNotOverlap) {
    PhraseLexicon<int> lex;
    lex.add("seite", 1);
    lex.add("auf der anderen Seite", 2);
    const std::vector<std::string> words{"auf", "der", "anderen", "seite", "und", "seite"};
    const auto m = lex.match(words);
    ASSERT_EQ(m.size(), 2u);
    EXPECT_EQ(m[0].entry->payload, 2);
    EXPECT_EQ(m[0].begin, 0u);
    EXPECT_EQ(m[0].end, 4u);
    EXPECT_EQ(m[1].entry->payload, 1);
    EXPECT_EQ(m[1].begin, 5u);
}

TEST(PhraseLexicon, TrailingStarIsPrefixMatch) {
    PhraseLexicon<int> lex;
    lex.add("musik*", 7);
    const std::vector<std::string> words{"musikunterricht", "musik", "mus"};
    const auto m = lex.match(words);
    ASSERT_EQ(m.size(), 2u);
    EXPECT_EQ(m[0].begin, 0u);
    EXPECT_EQ(m[1].begin, 1u);
}

TEST(PhraseLexicon, ExactWordPreferredOverWildcardOfSameLength) {
    PhraseLexicon<int> lex;
    lex.add("gut*", 1);
    lex.add("gut", 2);
    const std::vector<std::string> words{"gut"};
    const auto m = lex.match(words);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_EQ(m[0].entry->payload, 2);
}

TEST(PhraseLexicon, EntriesAreLowercasedAndBlankPhrasesIgnored) {
    PhraseLexicon<int> lex;
    lex.add("Deshalb", 1);
    lex.add("   ", 2);
    EXPECT_EQ(lex.size(), 1u);
    const std::vector<std::string> words{"deshalb"};
    EXPECT_EQ(lex.match(words).size(), 1u);
}

TEST(ErrorCodes, MessageStartsWithCodeName) {
    const Error e(Errc::prompt_gap, "x");
    EXPECT_EQ(std::string(e.what()), "prompt_gap: x");
    EXPECT_EQ(e.code(), Errc::prompt_gap);
}
