import random
import string

import pytest

from prsum.tokens import TokenSequence, split_sentences, tokenize_words


def test_punctuation_split():
    assert tokenize_words("the cat sat.").tokens == ["the", "cat", "sat", "."]


def test_empty_text():
    assert tokenize_words("").tokens == []


def test_hyphenated_token_stays_whole():
    assert tokenize_words("mvn java-formatter : format").tokens == [
        "mvn",
        "java-formatter",
        ":",
        "format",
    ]


def test_leading_and_trailing_punctuation():
    assert tokenize_words('"quoted!"').tokens == ['"', "quoted", "!", '"']


def test_all_punctuation_chunk():
    assert tokenize_words("...").tokens == [".", ".", "."]


def test_interior_punctuation_kept():
    assert tokenize_words("v2.0.1 don't").tokens == ["v2.0.1", "don't"]


def test_no_empty_tokens_and_exact_count_without_punctuation():
    rng = random.Random(7)
    for _ in range(200):
        k = rng.randint(0, 12)
        words = ["".join(rng.choices(string.ascii_lowercase, k=rng.randint(1, 8))) for _ in range(k)]
        seq = tokenize_words(" ".join(words))
        assert len(seq) == k
        assert all(tok for tok in seq.tokens)


def test_token_sequence_rejects_empty_tokens():
    with pytest.raises(ValueError):
        TokenSequence(["a", ""])


def test_token_sequence_rejects_unknown_kind():
    with pytest.raises(ValueError):
        TokenSequence(["a"], kind="mystery")


def test_two_sentences():
    assert split_sentences("a. b.") == ["a.", "b."]


def test_no_terminator():
    assert split_sentences("a") == ["a"]


def test_newline_boundary():
    assert split_sentences("fix bug\nadd test") == ["fix bug", "add test"]


def test_exclamation_and_question():
    assert split_sentences("stop! why? go") == ["stop!", "why?", "go"]


def test_sentences_preserve_word_order():
    rng = random.Random(21)
    terminators = [". ", "! ", "? ", "\n", " "]
    for _ in range(300):
        pieces = []
        for _ in range(rng.randint(0, 10)):
            pieces.append("".join(rng.choices(string.ascii_lowercase, k=rng.randint(1, 5))))
            pieces.append(rng.choice(terminators))
        text = "".join(pieces)
        joined = " ".join(split_sentences(text))
        strip = str.maketrans({ch: " " for ch in ".!?\n"})
        assert joined.translate(strip).split() == text.translate(strip).split()
