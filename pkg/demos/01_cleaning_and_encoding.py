"""From a raw comment to the padded index row System A reads."""

from moff.preprocess import clean_text, load_stopwords, preprocess
from moff.vocab import build_vocab, decode, default_max_len, encode_pad

raw = "@anu Ithu SOOOO bad aanu!!! #nirthu https://t.co/xyz"
print("raw:     ", raw)
print("cleaned: ", clean_text(raw))

stops = load_stopwords()
tokens = preprocess(raw, stops)
print("tokens:  ", tokens)          # 'so' is an English stopword, so it goes

corpus = [tokens, preprocess("nalla video bro", stops), preprocess("bad bad comment", stops)]
vocab = build_vocab(corpus)
print("vocab:   ", vocab.index_to_token)   # index 2 onward; 0 pads, 1 is unknown

max_len = default_max_len(corpus)
seq = encode_pad(preprocess("very bad video machane", stops), vocab, max_len)
print("encoded: ", seq.indices, "true length", seq.true_length)
print("decoded: ", decode(seq, vocab))
