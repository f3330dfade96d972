"""Smoke test for the braidgen Python extension."""

import json

import braidgen


def main():
    b4 = braidgen.Braids(4)
    assert b4.count(3) == 19
    assert braidgen.Braids(3).count(3) == 7
    assert braidgen.Braids(2).count(100) == 1

    assert b4.unrank(3, 16) == [3, 2, 1]
    assert b4.rank([3, 2, 1]) == 16
    assert b4.count_with_prefix(3, [3], 2) == 2
    assert b4.count_with_prefix(3, [3], 2, reference=True) == 2

    draws = b4.sample(3, count=4, seed=7)
    assert draws == b4.sample(3, count=4, seed=7)
    assert all(braidgen.ArtinWord(4, w).is_lex_representative() for w in draws)

    big = braidgen.Braids(16)
    assert big.count(64) > 2**64

    w = braidgen.ArtinWord(5, [4, 3])
    assert w.forbidden_prefixes() == [[1], [2, 3], [4]]
    assert not braidgen.ArtinWord(4, [2, 1, 2]).is_lex_representative()
    assert braidgen.normalize(3, [2, 1, 2]) == [1, 2, 1]
    assert len(braidgen.enumerate_lex_reps(3, 3)) == 7

    p = braidgen.PermBraid.from_word(3, [1])
    q = braidgen.PermBraid.from_word(3, [2])
    assert p.lcm(q).to_word() == [1, 2, 1]
    assert p.is_prefix_of(p.lcm(q))

    assert braidgen.automaton_states(5) == 56
    assert isinstance(json.loads(braidgen.automaton_export(3, "json")), dict)
    assert braidgen.automaton_export(3, "dot").startswith("digraph")

    try:
        b4.rank([2, 1, 2])
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
