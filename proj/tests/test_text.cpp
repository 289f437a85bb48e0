#include <gtest/gtest.h>

#include "costsense/errors.hpp"
#include "costsense/rng.hpp"
#include "costsense/text.hpp"

using namespace costsense;

namespace {

CharVocabulary abc() {
  const std::vector<std::string> corpus{"ab", "bc"};
  return CharVocabulary::fit(corpus);
}

}  // namespace

TEST(Vocabulary, LexicographicIdsAfterPadAndOov) {
  auto v = abc();
  EXPECT_EQ(v.size(), 5u);
  EXPECT_EQ(v.id(U'a'), 2);
  EXPECT_EQ(v.id(U'b'), 3);
  EXPECT_EQ(v.id(U'c'), 4);
  EXPECT_EQ(v.id(U'z'), CharVocabulary::oov_id);
}

TEST(Vocabulary, Lowercases) {
  const std::vector<std::string> upper{"AB"}, lower{"ab"};
  EXPECT_EQ(CharVocabulary::fit(upper), CharVocabulary::fit(lower));
}

TEST(Vocabulary, OrderIndependent) {
  std::vector<std::string> corpus{"example.com", "qz7x.net", "mail", "zz-top.org"};
  auto a = CharVocabulary::fit(corpus);
  Rng rng(3);
  for (int i = 0; i < 5; ++i) {
    rng.shuffle(corpus);
    EXPECT_EQ(CharVocabulary::fit(corpus), a);
  }
}

TEST(Vocabulary, EmptyCorpusIsDataError) {
  std::vector<std::string> none;
  EXPECT_THROW(CharVocabulary::fit(none), DataError);
}

TEST(Vocabulary, FromCharsRequiresSortedUnique) {
  EXPECT_THROW(CharVocabulary::from_chars({U'b', U'a'}), DataError);
  EXPECT_THROW(CharVocabulary::from_chars({U'a', U'a'}), DataError);
  EXPECT_EQ(CharVocabulary::from_chars({U'a', U'b', U'c'}), abc());
}

TEST(Encode, PadsTruncatesAndMapsOov) {
  auto v = abc();
  EXPECT_EQ(encode("abc", v, 5), (std::vector<std::int32_t>{2, 3, 4, 0, 0}));
  EXPECT_EQ(encode("abcabc", v, 3), (std::vector<std::int32_t>{2, 3, 4}));
  EXPECT_EQ(encode("aXb", v, 4), (std::vector<std::int32_t>{2, 1, 3, 0}));
  EXPECT_EQ(encode("ABC", v, 3), encode("abc", v, 3));
  EXPECT_THROW(encode("a", v, 0), ConfigError);
}

TEST(Encode, DecodeInvertsInVocabularyPrefix) {
  const std::vector<std::string> corpus{"the quick brown fox", "jumps over 13 lazy dogs."};
  auto v = CharVocabulary::fit(corpus);
  Rng rng(8);
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyz .13";
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const auto len = rng.below(30);
    for (std::uint64_t i = 0; i < len; ++i) text += alphabet[rng.below(alphabet.size())];
    const auto max_len = 1 + rng.below(25);
    auto ids = encode(text, v, max_len);
    EXPECT_EQ(decode(ids, v), text.substr(0, max_len));
  }
}

TEST(Encode, Utf8CharactersAreSingleTokens) {
  const std::vector<std::string> corpus{"caf\xC3\xA9"};
  auto v = CharVocabulary::fit(corpus);
  EXPECT_EQ(v.size(), 2u + 4u);
  auto ids = encode("\xC3\xA9" "a", v, 3);
  EXPECT_EQ(ids[0], v.id(U'é'));
  EXPECT_EQ(ids[1], v.id(U'a'));
  EXPECT_EQ(decode(ids, v), "\xC3\xA9" "a");
  // a lone continuation byte is not valid UTF-8
  EXPECT_EQ(decode_utf8("\x80x"), U"�x");
  EXPECT_EQ(decode_utf8("\xC3"), U"�");
}

TEST(EncodeBatch, RowsLengthsAndLabels) {
  auto v = abc();
  const std::vector<std::string> texts{"a", "abcabc"};
  const std::vector<int> labels{0, 1};
  auto batch = encode_batch(texts, labels, v, 4);
  EXPECT_EQ(batch.batch, 2u);
  EXPECT_EQ(batch.ids, (std::vector<std::int32_t>{2, 0, 0, 0, 2, 3, 4, 2}));
  EXPECT_EQ(batch.lengths, (std::vector<std::size_t>{1, 6}));
  EXPECT_EQ(batch.labels, labels);
  const std::vector<int> short_labels{1};
  EXPECT_THROW(encode_batch(texts, short_labels, v, 4), ContractError);
}

TEST(EncodeBatch, OovRate) {
  auto v = abc();
  const std::vector<std::string> texts{"abxy"};
  EXPECT_DOUBLE_EQ(oov_rate(texts, v), 0.5);
}

TEST(Ngrams, Examples) {
  EXPECT_EQ(ngram_counts("abc", 2, 2).counts, (std::map<std::string, std::uint32_t>{{"ab", 1}, {"bc", 1}}));
  EXPECT_EQ(ngram_counts("aaa", 1, 2).counts, (std::map<std::string, std::uint32_t>{{"a", 3}, {"aa", 2}}));
  EXPECT_TRUE(ngram_counts("", 1, 3).counts.empty());
  EXPECT_EQ(ngram_counts("AbC", 3, 3).counts, (std::map<std::string, std::uint32_t>{{"abc", 1}}));
}

TEST(Ngrams, InvalidRange) {
  EXPECT_THROW(ngram_counts("abc", 0, 1), ConfigError);
  EXPECT_THROW(ngram_counts("abc", 3, 2), ConfigError);
}

TEST(Ngrams, CountPerSizeIsLengthMinusNPlusOne) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    std::string text;
    const auto len = rng.below(15);
    for (std::uint64_t i = 0; i < len; ++i) text += static_cast<char>('a' + rng.below(3));
    for (int n = 1; n <= 4; ++n) {
      const auto expected = len >= static_cast<std::uint64_t>(n) ? len - n + 1 : 0;
      EXPECT_EQ(ngram_counts(text, n, n).total(), expected) << text << " n=" << n;
    }
  }
}
