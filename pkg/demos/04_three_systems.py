"""Train Systems A and B on the synthetic corpus and combine them into C.

This is the same run the learnability acceptance test makes, printed as the
three classification reports.  Takes about a minute.
"""

from moff.data import synth_corpus
from moff.metrics import confusion, render_report, report
from moff.pipeline import DESK_SCALE, TrainSettings, ensemble_predictions, predictions, train_a, train_b
from moff.pipeline import doc_features, tokenize_records
from moff.preprocess import load_stopwords
from moff.vocab import encode_batch

train, test = synth_corpus(7, 500, 200)
gold = [r.label for r in test]
print("first training comment:", train[0].text, "->", train[0].label)

settings = TrainSettings(seed=7, **DESK_SCALE)
model_a, vocab = train_a(train, settings)
model_b, pv = train_b(train, settings)

docs = tokenize_records(test, load_stopwords())
probs_a = model_a.predict_proba(*encode_batch(docs, vocab, model_a.cfg.max_len))
probs_b = model_b.predict_proba(doc_features(pv, docs))

runs = {
    "A": predictions(probs_a),
    "B": predictions(probs_b),
    "C": ensemble_predictions(probs_a, probs_b),
}
for name, preds in runs.items():
    print(f"\nSystem {name}")
    print(render_report(report(confusion([p.label for p in preds], gold))))
