"""Shared test data: a real fraud-judgment facts excerpt and toy models."""

import numpy as np

from lexdraft.corpus import Vocabulary, SPECIAL_NAMES

# Criminal-facts section of a published fraud judgment (two enumerated items).
FACTS_SAMPLE = (
    "一、林翊羽能預見，任意將所有之金融機構帳戶資料交付予他人，足供他人用為詐欺等犯罪後收受匯款，"
    "以遂其掩飾或隱匿犯罪所得財物目的之工具，詎以前開結果之發生亦不違其本意，竟基於幫助他人從事不法"
    "行為之犯意，於民國100年4月21日前之不詳時間，在不詳地點，將其向苗栗市農會所申請之帳號"
    "0000000000000000號帳戶之存摺、提款卡（包括密碼），以不詳之代價，提供與不詳年籍之人使用。"
    "而該不詳年籍人士與詐騙集團成員，基於意圖為自己不法之所有，於同年月21日中午12時19分許，"
    "撥打電話向被害人張培超以假冒好友謊稱急需錢等詐騙手法，使張培超誤以為真，而依指示操作後匯出款項"
    "新臺幣10萬元至林翊羽上開帳戶內而受騙。\n"
    "二、案經張培超訴由苗栗縣警察局苗栗分局報告偵辦。"
)

# A second facts narrative following the same canonical element layout,
# with interleaved repeats (ring member passes account data to a caller).
FACTS_SAMPLE_B = (
    "一、詐騙集團成員明知詐術，基於幫助他人從事不法行為之犯意，於民國103年8月初某日，"
    "以詐騙手法將帳戶資料提供與不詳年籍之人使用。嗣該不詳年籍之人取得上開帳戶資料後，"
    "即意圖為自己不法所有，於103年8月18日19時50分許，撥打電話給被害人鄭玉珍，"
    "假冒監理站人員謊稱中獎云云，使本人或第三人陷於錯誤，而依指示匯出款項至詐騙集團成員"
    "指定之帳戶。嗣被害人鄭玉珍察覺受騙，報警處理，始查悉上情。"
)

# Writing-assistance starter used in demos (fictitious name).
PROMPT_SAMPLE = "闕很大明知金融帳戶之存摺、提款卡及密碼係供自己使用之重要理財工具，"


def make_judgment(facts: str) -> str:
    """Wrap a facts section in minimal judgment boilerplate."""
    return (
        "臺灣苗栗地方法院刑事判決\n"
        "公訴人 臺灣苗栗地方檢察署檢察官\n"
        "主文\n"
        "林翊羽幫助犯詐欺取財罪。\n"
        "犯罪事實\n"
        f"{facts}\n"
        "理由\n"
        "一、前開犯罪事實，業據被告坦承不諱。\n"
    )


def small_vocab(chars: str) -> Vocabulary:
    tokens = list(SPECIAL_NAMES) + list(dict.fromkeys(chars))
    return Vocabulary(tokens=tokens, counts={c: 1 for c in tokens[3:]})


class TableLm:
    """Fixed next-token distributions keyed by the full context tuple."""

    def __init__(self, vocab, table, default=None):
        self.vocab = vocab
        self.table = {tuple(k): np.asarray(v, dtype=float) for k, v in table.items()}
        size = len(vocab)
        self.default = (
            np.full(size, 1.0 / size) if default is None else np.asarray(default, float)
        )

    def distribution(self, context_ids):
        return self.table.get(tuple(context_ids), self.default).copy()


class ChainLm:
    """Deterministic model: emit the ids of `chain` then EOS, one-hot each step."""

    def __init__(self, vocab, chain, stop=True):
        self.vocab = vocab
        self.chain = list(chain)
        self.stop = stop

    def distribution(self, context_ids):
        dist = np.zeros(len(self.vocab))
        step = len(context_ids)
        if step < len(self.chain):
            dist[self.chain[step]] = 1.0
        elif self.stop:
            dist[1] = 1.0  # EOS
        else:
            dist[self.chain[step % len(self.chain)]] = 1.0
        return dist


class RandomLm:
    """Seeded random distributions, stable for a given (seed, context)."""

    def __init__(self, vocab, seed, eos_weight=1.0):
        self.vocab = vocab
        self.seed = seed
        self.eos_weight = eos_weight

    def distribution(self, context_ids):
        key = (self.seed, tuple(context_ids))
        rng = np.random.default_rng(abs(hash(key)) % (2**63))
        probs = rng.random(len(self.vocab)) + 1e-3
        probs[1] *= self.eos_weight
        return probs / probs.sum()
